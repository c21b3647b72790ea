#include "qem/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace qem::fft
{
namespace
{
//! Plans are created once per shape; execution with new arrays is
//! thread-safe in FFTW, creation is not.
fftw_plan get_plan(int rank, int n0, int n1, Sign sign)
{
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int, int>, fftw_plan> plans;

    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(rank, n0, n1, static_cast<int>(sign));
    auto it = plans.find(key);
    if (it != plans.end())
        return it->second;

    std::vector<fftw_complex> scratch(static_cast<std::size_t>(n0) * n1);
    int const fsign = sign == Sign::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    unsigned const flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = rank == 1
                      ? fftw_plan_dft_1d(n0, scratch.data(), scratch.data(),
                                         fsign, flags)
                      : fftw_plan_dft_2d(n0, n1, scratch.data(),
                                         scratch.data(), fsign, flags);
    plans.emplace(key, p);
    return p;
}

}  // namespace

void dft1d(cplx* data, int n, Sign sign)
{
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(get_plan(1, n, 1, sign), p, p);
}

void dft2d(cplx* data, int rows, int cols, Sign sign)
{
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(get_plan(2, rows, cols, sign), p, p);
}

void centered_dft2d(cplx* data, int rows, int cols, Sign sign)
{
    // With index i-N/2, the kernel factors into (-1)^i (-1)^k (-1)^(N/2)
    // times the plain DFT kernel, for even N.
    auto parity = [](int i) { return (i & 1) ? -1.0 : 1.0; };
    double const global = parity(rows / 2) * parity(cols / 2);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            data[i * cols + j] *= parity(i) * parity(j);
    dft2d(data, rows, cols, sign);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            data[i * cols + j] *= global * parity(i) * parity(j);
}

}  // namespace qem::fft
