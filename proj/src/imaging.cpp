#include "qem/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qem/errors.hpp"
#include "qem/rng.hpp"

namespace qem
{
using constants::pi;

namespace
{
constexpr double hbar_c_eV_nm = 197.3269804;
constexpr double atomic_mass_kg = 1.66053906660e-27;
constexpr double water_molar_mass_u = 18.015;

CplxGrid to_complex(RealGrid const& g)
{
    CplxGrid c(g.rows, g.cols);
    for (std::size_t k = 0; k < g.size(); ++k)
        c.data[k] = g.data[k];
    return c;
}

std::string trim(std::string s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

//---------------------------------------------------------------------------//
Element element_from_symbol(std::string const& symbol)
{
    std::string s = trim(symbol);
    for (auto& ch : s)
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (s == "H")
        return Element::H;
    if (s == "C")
        return Element::C;
    if (s == "N")
        return Element::N;
    if (s == "O")
        return Element::O;
    if (s == "S")
        return Element::S;
    throw ConfigError("unsupported element '" + symbol + "'");
}

char const* to_string(Element el)
{
    static char const* names[] = {"H", "C", "N", "O", "S"};
    return names[static_cast<int>(el)];
}

ElementTable ElementTable::defaults()
{
    ElementTable t;
    t.data = {{
        {0.0253, 0.0},
        {0.118, 0.180},
        {0.106, 0.164},
        {0.095, 0.144},
        {0.246, 0.177},
    }};
    return t;
}

double potential_per_amplitude(BeamModel const& beam)
{
    double const mc2 = constants::electron_rest_energy_eV;
    return 2 * pi * hbar_c_eV_nm * hbar_c_eV_nm / mc2 / beam.gamma();
}

double ElementTable::scattering_amplitude_nm(Element el, BeamModel const& beam) const
{
    return (*this)[el].inner_potential_Vnm3 / potential_per_amplitude(beam);
}

double water_molecular_volume_nm3(double ice_density_kg_m3)
{
    if (!(ice_density_kg_m3 > 0))
        throw DomainError("ice density must be positive");
    return water_molar_mass_u * atomic_mass_kg / ice_density_kg_m3 * 1e27;
}

double mean_ice_potential(ElementTable const& table, double ice_density_kg_m3)
{
    double v = 2 * table[Element::H].inner_potential_Vnm3
               + table[Element::O].inner_potential_Vnm3;
    return v / water_molecular_volume_nm3(ice_density_kg_m3);
}

//---------------------------------------------------------------------------//
AtomList read_atoms_text(std::istream& in)
{
    AtomList atoms;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto c = line.find('#'); c != std::string::npos)
            line.erase(c);
        if (trim(line).empty())
            continue;
        std::istringstream ss(line);
        std::string sym;
        Atom a;
        if (!(ss >> sym >> a.x >> a.y >> a.z))
            throw ConfigError("atom list line " + std::to_string(lineno) + ": expected 'element x y z'");
        a.element = element_from_symbol(sym);
        ss >> a.residue;
        atoms.push_back(a);
    }
    return atoms;
}

AtomList read_pdb(std::istream& in)
{
    AtomList atoms;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.rfind("ATOM", 0) != 0 && line.rfind("HETATM", 0) != 0)
            continue;
        if (line.size() < 54)
            throw ConfigError("truncated PDB coordinate record");
        Atom a;
        try
        {
            a.x = std::stod(line.substr(30, 8)) / 10;
            a.y = std::stod(line.substr(38, 8)) / 10;
            a.z = std::stod(line.substr(46, 8)) / 10;
        }
        catch (std::exception const&)
        {
            throw ConfigError("bad PDB coordinates: " + line);
        }
        std::string sym = line.size() >= 78 ? trim(line.substr(76, 2)) : "";
        if (sym.empty())
        {
            // Fall back to the first letter of the atom name
            for (char ch : line.substr(12, 4))
                if (std::isalpha(static_cast<unsigned char>(ch)))
                {
                    sym = std::string(1, ch);
                    break;
                }
        }
        a.element = element_from_symbol(sym);
        a.residue = trim(line.substr(17, 3));
        atoms.push_back(a);
    }
    return atoms;
}

AtomList load_atoms(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open atom file '" + path + "'");
    auto ends_with = [&](std::string const& ext) {
        return path.size() >= ext.size()
               && path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
    };
    if (ends_with(".pdb") || ends_with(".ent") || ends_with(".PDB"))
        return read_pdb(in);
    return read_atoms_text(in);
}

AtomList synthetic_blob(int n_atoms, double radius_nm, Rng& rng)
{
    if (n_atoms < 0 || !(radius_nm > 0))
        throw ConfigError("synthetic_blob: need n >= 0 and a positive radius");
    AtomList atoms;
    atoms.reserve(n_atoms);
    std::array<double, 4> const freq{0.63, 0.17, 0.19, 0.01};
    std::array<Element, 4> const kinds{Element::C, Element::N, Element::O, Element::S};
    while (static_cast<int>(atoms.size()) < n_atoms)
    {
        Atom a;
        a.x = rng.uniform(-radius_nm, radius_nm);
        a.y = rng.uniform(-radius_nm, radius_nm);
        a.z = rng.uniform(-radius_nm, radius_nm);
        if (a.x * a.x + a.y * a.y + a.z * a.z > radius_nm * radius_nm)
            continue;
        a.element = kinds[rng.discrete(freq.begin(), freq.end())];
        atoms.push_back(a);
    }
    return atoms;
}

//---------------------------------------------------------------------------//
PixelImage make_image(int size, double pixel_nm)
{
    if (size < 2 || size % 2 != 0)
        throw ConfigError("image size must be even and >= 2");
    if (!(pixel_nm > 0))
        throw ConfigError("pixel size must be positive");
    return PixelImage{RealGrid(size, size, 0.0), pixel_nm};
}

VoxelMask molecular_mask(AtomList const& atoms,
                         ElementTable const& table,
                         int size,
                         double pixel_nm,
                         double thickness_nm,
                         double z_center_nm)
{
    VoxelMask mask;
    mask.nx = mask.ny = size;
    mask.nz = std::max(1, static_cast<int>(std::lround(thickness_nm / pixel_nm)));
    mask.voxel_nm = pixel_nm;
    mask.inside.assign(static_cast<std::size_t>(size) * size * mask.nz, 0);
    double const z_lo = z_center_nm - 0.5 * mask.nz * pixel_nm;
    double const l = pixel_nm;

    for (auto const& a : atoms)
    {
        double rad = table[a.element].radius_nm;
        if (!(rad > 0))
            continue;
        double cx = a.x / l + size / 2, cy = a.y / l + size / 2;
        double cz = (a.z - z_lo) / l - 0.5;
        int span = static_cast<int>(std::ceil(rad / l)) + 1;
        for (int i = std::max(0, int(cy) - span); i <= std::min(size - 1, int(cy) + span); ++i)
            for (int j = std::max(0, int(cx) - span); j <= std::min(size - 1, int(cx) + span); ++j)
                for (int k = std::max(0, int(cz) - span); k <= std::min(mask.nz - 1, int(cz) + span); ++k)
                {
                    double dx = (j - cx) * l, dy = (i - cy) * l, dz = (k - cz) * l;
                    if (dx * dx + dy * dy + dz * dz <= rad * rad)
                        mask.inside[(static_cast<std::size_t>(i) * size + j) * mask.nz + k] = 1;
                }
    }
    return mask;
}

double molecule_area(VoxelMask const& mask)
{
    long columns = 0;
    for (int i = 0; i < mask.nx; ++i)
        for (int j = 0; j < mask.ny; ++j)
        {
            bool any = false;
            for (int k = 0; k < mask.nz && !any; ++k)
                any = mask(i, j, k);
            columns += any;
        }
    return columns * mask.voxel_nm * mask.voxel_nm;
}

PhaseMapResult phase_map_from_atoms(AtomList const& atoms,
                                    ElementTable const& table,
                                    BeamModel const& beam,
                                    PhaseMapOptions const& opts)
{
    if (!(opts.blur_sigma_nm > 0) || !(opts.truncation_sigmas > 0))
        throw ConfigError("blur width and truncation must be positive");
    PhaseMapResult res;
    res.image = make_image(opts.size, opts.pixel_nm);
    int const N = opts.size;
    double const l = opts.pixel_nm;
    double const lambda = beam.wavelength_nm();
    double const sg = opts.blur_sigma_nm;
    RealGrid& img = res.image.data;

    AtomList shifted = atoms;
    if (opts.center_atoms && !atoms.empty())
    {
        double mx = 0, my = 0;
        for (auto const& a : atoms)
        {
            mx += a.x;
            my += a.y;
        }
        mx /= atoms.size();
        my /= atoms.size();
        for (auto& a : shifted)
        {
            a.x -= mx;
            a.y -= my;
        }
    }

    double const f_H = table.scattering_amplitude_nm(Element::H, beam);
    int const span = static_cast<int>(std::ceil(opts.truncation_sigmas * sg / l));
    std::vector<double> weights;
    for (auto const& a : shifted)
    {
        double f = table.scattering_amplitude_nm(a.element, beam)
                   + opts.hydrogen_per_atom[static_cast<int>(a.element)] * f_H;
        double cx = a.x / l + N / 2, cy = a.y / l + N / 2;
        int i0 = static_cast<int>(std::lround(cy)) - span;
        int j0 = static_cast<int>(std::lround(cx)) - span;
        int const w = 2 * span + 1;
        weights.assign(static_cast<std::size_t>(w) * w, 0.0);
        double total = 0;
        for (int di = 0; di < w; ++di)
            for (int dj = 0; dj < w; ++dj)
            {
                double dx = (j0 + dj - cx) * l, dy = (i0 + di - cy) * l;
                double r2 = dx * dx + dy * dy;
                if (r2 > std::pow(opts.truncation_sigmas * sg, 2))
                    continue;
                double v = std::exp(-0.5 * r2 / (sg * sg));
                weights[di * w + dj] = v;
                total += v;
            }
        // Normalized stamp: the atom deposits exactly lambda f of phase
        double scale = lambda * f / (total * l * l);
        for (int di = 0; di < w; ++di)
        {
            int i = i0 + di;
            if (i < 0 || i >= N)
                continue;
            for (int dj = 0; dj < w; ++dj)
            {
                int j = j0 + dj;
                if (j >= 0 && j < N)
                    img(i, j) += scale * weights[di * w + dj];
            }
        }
    }

    if (opts.water)
    {
        double zc = 0;
        for (auto const& a : shifted)
            zc += a.z;
        zc = shifted.empty() ? 0 : zc / shifted.size();
        VoxelMask mask = molecular_mask(shifted, table, N, l, opts.box_thickness_nm, zc);
        res.molecule_area_nm2 = molecule_area(mask);
        double density = mean_ice_potential(table, opts.ice_density_kg_m3)
                         / potential_per_amplitude(beam);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
            {
                int filled = 0;
                for (int k = 0; k < mask.nz; ++k)
                    filled += mask(i, j, k);
                img(i, j) += lambda * density * (mask.nz - filled) * l;
            }
    }

    double sum = 0;
    for (double v : img.data)
        sum += v;
    res.integrated_phase_nm2 = sum * l * l;
    double mean = sum / img.size();
    for (double& v : img.data)
        v -= mean;
    return res;
}

//---------------------------------------------------------------------------//
std::vector<SpectrumRow> radial_power_spectrum(PixelImage const& image)
{
    int const N = image.size();
    double const l = image.pixel_nm;
    CplxGrid X = to_complex(image.data);
    fft::dft2d(X, fft::Sign::forward);

    int const nbins = static_cast<int>(std::lround(std::hypot(N / 2, N / 2))) + 1;
    std::vector<SpectrumRow> rows(nbins);
    double const npix = static_cast<double>(N) * N;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
        {
            int b = static_cast<int>(std::lround(
                std::hypot(fft::signed_index(i, N), fft::signed_index(j, N))));
            double p = std::norm(X(i, j));
            rows[b].power += p * l * l * l * l;
            rows[b].psd += p * l * l / npix;
            rows[b].count += 1;
        }
    double const dq = 2 * pi / (N * l);
    for (int b = 0; b < nbins; ++b)
    {
        rows[b].q_per_nm = b * dq;
        if (rows[b].count > 0)
        {
            rows[b].power /= rows[b].count;
            rows[b].psd /= rows[b].count;
        }
    }
    return rows;
}

double spectrum_mean_square(std::vector<SpectrumRow> const& rows, PixelImage const& image)
{
    double const dq = 2 * pi / (image.size() * image.pixel_nm);
    double s = 0;
    for (auto const& r : rows)
        s += r.psd * r.count;
    return s * dq * dq / (4 * pi * pi);
}

LineFit fit_line(std::vector<double> const& x, std::vector<double> const& y)
{
    std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw NumericError("line fit needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0))
        throw NumericError("line fit abscissae are degenerate");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

namespace
{
LineFit log_power_fit(std::vector<SpectrumRow> const& rows,
                      double q_lo,
                      double q_hi,
                      double q_scale)
{
    std::vector<double> x, y;
    for (auto const& r : rows)
    {
        if (r.q_per_nm < q_lo || r.q_per_nm > q_hi || !(r.power > 0))
            continue;
        double q = r.q_per_nm / q_scale;
        x.push_back(q * q);
        y.push_back(std::log(r.power));
    }
    return fit_line(x, y);
}
}  // namespace

GuinierFit fit_guinier(std::vector<SpectrumRow> const& rows, double q_lo, double q_hi)
{
    GuinierFit g;
    g.line = log_power_fit(rows, q_lo, q_hi, 1.0);
    if (!(g.line.slope < 0))
        throw NumericError("Guinier slope is not negative");
    g.radius_of_gyration_nm = std::sqrt(-3 * g.line.slope);
    return g;
}

double fit_b_factor(std::vector<SpectrumRow> const& rows, double q_lo, double q_hi)
{
    return -2 * log_power_fit(rows, q_lo, q_hi, 2 * pi).slope;
}

//---------------------------------------------------------------------------//
RealGrid bin_angles(int size, double pixel_nm, double wavelength_nm)
{
    RealGrid beta(size, size);
    double const scale = wavelength_nm / (size * pixel_nm);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            beta(i, j) = scale * std::hypot(fft::signed_index(i, size), fft::signed_index(j, size));
    return beta;
}

PixelImage apply_angular_filter(PixelImage const& image,
                                AngularFilter const& filter,
                                double wavelength_nm)
{
    int const N = image.size();
    RealGrid beta = bin_angles(N, image.pixel_nm, wavelength_nm);
    CplxGrid X = to_complex(image.data);
    fft::dft2d(X, fft::Sign::forward);
    for (std::size_t k = 0; k < X.size(); ++k)
        X.data[k] *= filter(beta.data[k]);
    fft::dft2d(X, fft::Sign::backward);
    PixelImage out{RealGrid(N, N), image.pixel_nm};
    double const npix = static_cast<double>(N) * N;
    for (std::size_t k = 0; k < X.size(); ++k)
        out.data.data[k] = X.data[k].real() / npix;
    return out;
}

PixelImage synthesize_noise(AngularFilter const& spectrum,
                            int size,
                            double pixel_nm,
                            double wavelength_nm,
                            std::uint64_t seed)
{
    PixelImage white = make_image(size, pixel_nm);
    Rng rng(seed);
    for (double& v : white.data.data)
        v = rng.normal();
    return apply_angular_filter(white, spectrum, wavelength_nm);
}

double bandpass_gain(double beta, double beta_L, double beta_H)
{
    double b2 = beta * beta;
    return std::exp(-b2 / (2 * beta_H * beta_H)) * -std::expm1(-b2 / (2 * beta_L * beta_L));
}

PixelImage bandpass(PixelImage const& image,
                    double wavelength_nm,
                    double beta_L,
                    double beta_H)
{
    if (!(beta_L > 0) || !(beta_H > 0))
        throw ConfigError("band-pass angles must be positive");
    return apply_angular_filter(
        image, [=](double b) { return bandpass_gain(b, beta_L, beta_H); }, wavelength_nm);
}

//---------------------------------------------------------------------------//
std::vector<Figure3Panel> render_figure3(PixelImage const& map,
                                         BeamModel const& beam,
                                         DoseModel const& dose,
                                         MuTable const& mu,
                                         Figure3Options const& opts)
{
    double const lambda = beam.wavelength_nm();
    int const N = map.size();
    auto noisy = [&](AngularFilter const& spectrum) {
        PixelImage noise = synthesize_noise(spectrum, N, map.pixel_nm, lambda, opts.seed);
        for (std::size_t k = 0; k < noise.data.size(); ++k)
            noise.data.data[k] += map.data.data[k];
        return bandpass(noise, lambda, opts.beta_L, opts.beta_H);
    };

    std::vector<Figure3Panel> panels;
    panels.push_back({"a_zero_noise", bandpass(map, lambda, opts.beta_L, opts.beta_H)});
    panels.push_back({"b_classical",
                      noisy(PhaseNoiseSpectrum(NoiseKind::classical, 1, beam, dose, nullptr))});
    char const tags[2][2] = {{'c', 'd'}, {'e', 'f'}};
    for (int i = 0; i < 2; ++i)
    {
        double k1 = opts.k1[i];
        std::string suffix = "_k" + std::to_string(static_cast<int>(std::lround(k1)));
        panels.push_back({std::string(1, tags[i][0]) + "_qem" + suffix,
                          noisy(PhaseNoiseSpectrum(NoiseKind::qem, k1, beam, dose, &mu))});
        panels.push_back({std::string(1, tags[i][1]) + "_qem_isn" + suffix,
                          noisy(PhaseNoiseSpectrum(NoiseKind::qem_isn, k1, beam, dose, &mu))});
    }
    return panels;
}

PixelImage crop_center(PixelImage const& image, int rows, int cols)
{
    int const N = image.size();
    rows = std::min(rows, N);
    cols = std::min(cols, N);
    int r0 = (N - rows) / 2, c0 = (N - cols) / 2;
    PixelImage out{RealGrid(rows, cols), image.pixel_nm};
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out.data(i, j) = image.data(r0 + i, c0 + j);
    return out;
}

std::vector<std::uint8_t> contrast_bytes(RealGrid const& data)
{
    double mean = 0, var = 0;
    for (double v : data.data)
        mean += v;
    mean /= data.size();
    for (double v : data.data)
        var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / data.size());
    std::vector<std::uint8_t> out(data.size(), 128);
    if (!(sd > 0))
        return out;
    double lo = mean - 5 * sd, span = 10 * sd;
    for (std::size_t k = 0; k < data.size(); ++k)
    {
        double g = std::round(255 * (data.data[k] - lo) / span);
        out[k] = static_cast<std::uint8_t>(std::clamp(g, 0.0, 255.0));
    }
    return out;
}

void write_pgm(std::string const& path, RealGrid const& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << "P5\n" << data.cols << ' ' << data.rows << "\n255\n";
    auto bytes = contrast_bytes(data);
    out.write(reinterpret_cast<char const*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

void write_csv_grid(std::string const& path, RealGrid const& data)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    char buf[32];
    for (int i = 0; i < data.rows; ++i)
    {
        for (int j = 0; j < data.cols; ++j)
        {
            std::snprintf(buf, sizeof buf, "%.9g", data(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

RealGrid read_csv_grid(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::vector<double> values;
    int rows = 0, cols = -1;
    std::string line;
    while (std::getline(in, line))
    {
        if (trim(line).empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        int n = 0;
        while (std::getline(ss, cell, ','))
        {
            try
            {
                values.push_back(std::stod(cell));
            }
            catch (std::exception const&)
            {
                throw ConfigError("non-numeric cell in '" + path + "'");
            }
            ++n;
        }
        if (cols >= 0 && n != cols)
            throw ConfigError("ragged rows in '" + path + "'");
        cols = n;
        ++rows;
    }
    if (rows == 0)
        throw ConfigError("empty grid file '" + path + "'");
    RealGrid g(rows, cols);
    g.data = std::move(values);
    return g;
}

}  // namespace qem
