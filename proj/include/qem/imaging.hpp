#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qem/fft.hpp"
#include "qem/isn_analysis.hpp"
#include "qem/physics.hpp"
#include "qem/rng.hpp"

namespace qem
{
//---------------------------------------------------------------------------//
enum class Element
{
    H,
    C,
    N,
    O,
    S,
};
inline constexpr int num_elements = 5;

Element element_from_symbol(std::string const& symbol);
char const* to_string(Element el);

struct ElementData
{
    double inner_potential_Vnm3 = 0;
    double radius_nm = 0;
};

struct ElementTable
{
    std::array<ElementData, num_elements> data;

    static ElementTable defaults();
    ElementData const& operator[](Element el) const
    {
        return data[static_cast<int>(el)];
    }
    //! f(0) in nm from the inner potential
    double scattering_amplitude_nm(Element el, BeamModel const& beam) const;
};

//! sqrt(1 - v^2/c^2) 2 pi hbar^2 / (m_e e) in V nm^2
double potential_per_amplitude(BeamModel const& beam);

//! (2 V_H + V_O) / v_water with v_water from the ice mass density
double mean_ice_potential(ElementTable const& table, double ice_density_kg_m3 = 930);
double water_molecular_volume_nm3(double ice_density_kg_m3 = 930);

//---------------------------------------------------------------------------//
struct Atom
{
    Element element = Element::C;
    double x = 0, y = 0, z = 0;  //!< nm
    std::string residue;
};
using AtomList = std::vector<Atom>;

//! Lines of "element x y z [residue]" in nm; '#' starts a comment
AtomList read_atoms_text(std::istream& in);
//! ATOM/HETATM records, coordinates converted from angstrom
AtomList read_pdb(std::istream& in);
//! Dispatch on extension (.pdb, .ent use the PDB reader)
AtomList load_atoms(std::string const& path);

//! Heavy atoms uniform in a ball, protein-like C/N/O/S frequencies
AtomList synthetic_blob(int n_atoms, double radius_nm, Rng& rng);

//---------------------------------------------------------------------------//
//! Square image, row i at y = (i - N/2) l, column j at x = (j - N/2) l
struct PixelImage
{
    RealGrid data;
    double pixel_nm = 0.05;

    int size() const { return data.rows; }
};

PixelImage make_image(int size, double pixel_nm);

struct PhaseMapOptions
{
    int size = 240;
    double pixel_nm = 0.05;
    double blur_sigma_nm = 0.1;
    double truncation_sigmas = 6;
    //! Shift the atoms so their xy centroid sits at the image center
    bool center_atoms = true;
    //! Extra hydrogen count folded into each heavy element
    std::array<double, num_elements> hydrogen_per_atom{};
    //! Uniform ice background outside the molecular mask
    bool water = false;
    double box_thickness_nm = 12;
    double ice_density_kg_m3 = 930;
};

struct PhaseMapResult
{
    PixelImage image;  //!< mean subtracted
    double integrated_phase_nm2 = 0;  //!< sum x pixel area before subtraction
    double molecule_area_nm2 = 0;  //!< only computed with the water model
};

PhaseMapResult phase_map_from_atoms(AtomList const& atoms,
                                    ElementTable const& table,
                                    BeamModel const& beam,
                                    PhaseMapOptions const& opts);

//! Voxel occupancy; voxel (i, j, k) follows the PixelImage xy layout
struct VoxelMask
{
    int nx = 0, ny = 0, nz = 0;
    double voxel_nm = 0;
    std::vector<std::uint8_t> inside;

    std::uint8_t operator()(int i, int j, int k) const
    {
        return inside[(static_cast<std::size_t>(i) * ny + j) * nz + k];
    }
};

VoxelMask molecular_mask(AtomList const& atoms,
                         ElementTable const& table,
                         int size,
                         double pixel_nm,
                         double thickness_nm,
                         double z_center_nm);

//! Area of the columns whose projected occupancy is strictly positive
double molecule_area(VoxelMask const& mask);

//---------------------------------------------------------------------------//
struct SpectrumRow
{
    double q_per_nm = 0;
    double power = 0;  //!< mean |l^2 X|^2, the continuous transform squared
    double psd = 0;  //!< mean l^2 |X|^2 / N_pix
    int count = 0;
};

//! Radial bins one reciprocal pixel wide, bin b holds round(|k|) == b
std::vector<SpectrumRow> radial_power_spectrum(PixelImage const& image);
//! Sum of psd * dq^2 / (2 pi)^2 over every Fourier bin
double spectrum_mean_square(std::vector<SpectrumRow> const& rows, PixelImage const& image);

struct LineFit
{
    double slope = 0;
    double intercept = 0;
};

LineFit fit_line(std::vector<double> const& x, std::vector<double> const& y);

struct GuinierFit
{
    LineFit line;  //!< ln power vs q^2
    double radius_of_gyration_nm = 0;
};

GuinierFit fit_guinier(std::vector<SpectrumRow> const& rows, double q_lo, double q_hi);
//! B from ln power vs (q / 2 pi)^2, slope -B/2
double fit_b_factor(std::vector<SpectrumRow> const& rows, double q_lo, double q_hi);

//---------------------------------------------------------------------------//
//! Scattering angle of every Fourier bin, lambda |k| / (N l)
RealGrid bin_angles(int size, double pixel_nm, double wavelength_nm);

using AngularFilter = std::function<double(double)>;

//! Multiply the image spectrum by filter(beta) per bin
PixelImage apply_angular_filter(PixelImage const& image,
                                AngularFilter const& filter,
                                double wavelength_nm);

//! White unit Gaussian field colored by the spectrum, real part kept
PixelImage synthesize_noise(AngularFilter const& spectrum,
                            int size,
                            double pixel_nm,
                            double wavelength_nm,
                            std::uint64_t seed);

double bandpass_gain(double beta, double beta_L, double beta_H);
PixelImage bandpass(PixelImage const& image,
                    double wavelength_nm,
                    double beta_L,
                    double beta_H);

//---------------------------------------------------------------------------//
struct Figure3Options
{
    double beta_L = 2e-3;
    double beta_H = 3.5e-3;
    std::array<double, 2> k1{10, 5};
    std::uint64_t seed = 1;
    int crop_rows = 80;
    int crop_cols = 200;
};

struct Figure3Panel
{
    std::string label;
    PixelImage image;
};

/*!
 * Zero noise, classical, then QEM and QEM with ISN for each k1.
 *
 * All noisy panels share one white field, so they differ only by the
 * spectral multiplier.
 */
std::vector<Figure3Panel> render_figure3(PixelImage const& map,
                                         BeamModel const& beam,
                                         DoseModel const& dose,
                                         MuTable const& mu,
                                         Figure3Options const& opts);

PixelImage crop_center(PixelImage const& image, int rows, int cols);
//! 8-bit gray levels spanning mean -+ 5 standard deviations
std::vector<std::uint8_t> contrast_bytes(RealGrid const& data);

void write_pgm(std::string const& path, RealGrid const& data);
void write_csv_grid(std::string const& path, RealGrid const& data);
RealGrid read_csv_grid(std::string const& path);

}  // namespace qem
