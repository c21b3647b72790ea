#pragma once

#include <complex>
#include <vector>

namespace qem
{
using cplx = std::complex<double>;

//---------------------------------------------------------------------------//
//! Dense row-major 2-D array.
template<class T>
struct Grid
{
    int rows = 0;
    int cols = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(int r, int c, T fill = T{}) : rows(r), cols(c), data(r * c, fill) {}

    T& operator()(int i, int j) { return data[i * cols + j]; }
    T const& operator()(int i, int j) const { return data[i * cols + j]; }
    std::size_t size() const { return data.size(); }
};

using RealGrid = Grid<double>;
using CplxGrid = Grid<cplx>;

namespace fft
{
enum class Sign : int
{
    forward = -1,  //!< kernel exp(-2 pi i jk/N)
    backward = +1,  //!< kernel exp(+2 pi i jk/N)
};

// Unnormalized in-place transforms
void dft1d(cplx* data, int n, Sign sign);
void dft2d(cplx* data, int rows, int cols, Sign sign);
inline void dft2d(CplxGrid& g, Sign sign)
{
    dft2d(g.data.data(), g.rows, g.cols, sign);
}

/*!
 * In-place transform over centered indices.
 *
 * Both input and output indices run over [-N/2, N/2) and are stored at
 * offset N/2. No normalization is applied.
 */
void centered_dft2d(cplx* data, int rows, int cols, Sign sign);

//! Signed frequency index for FFT bin k of an n-point transform
inline int signed_index(int k, int n)
{
    return k < (n + 1) / 2 ? k : k - n;
}

}  // namespace fft
}  // namespace qem
