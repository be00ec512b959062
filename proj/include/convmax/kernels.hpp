#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "convmax/grid.hpp"
#include "convmax/io.hpp"

namespace convmax {

/// h(x) = |x|^(-n/q_exp).  Needs q_exp > 1 so the origin singularity is
/// locally integrable and cell averages stay finite.
struct PowerKernel {
    double q_exp;
};

/// Power kernel cut to |x| <= radius.
struct TruncatedPowerKernel {
    double q_exp;
    double radius;
};

/// min(|x|^(-n/q_exp), cap); bounded, so any q_exp > 0 is allowed.
struct CappedPowerKernel {
    double q_exp;
    double cap;
};

/// exp(-|x|^2 / (2 sigma^2)), amplitude one.
struct GaussianKernel {
    double sigma;
};

/// Indicator of the centered ball of the given radius.
struct IndicatorKernel {
    double radius;
};

/// Samples read from a CSV file; must match the target grid exactly.
struct FileKernel {
    std::string path;
};

using KernelSpec = std::variant<PowerKernel, TruncatedPowerKernel, CappedPowerKernel,
                                GaussianKernel, IndicatorKernel, FileKernel>;

namespace detail {

inline void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw domain_error(std::string("kernel parameter '") + name + "' must be positive");
}

/// Average of |x|^(-alpha) over the 1-D cell [a, b] containing the origin,
/// clipped to |x| <= trunc.  Closed form; needs alpha < 1.
inline double origin_cell_average_1d(double a, double b, double alpha, double trunc) {
    const double lo = std::max(-trunc, a);
    const double hi = std::min(trunc, b);
    if (hi <= lo) return 0.0;
    const double left = lo < 0.0 ? std::pow(-lo, 1.0 - alpha) : 0.0;
    const double right = hi > 0.0 ? std::pow(hi, 1.0 - alpha) : 0.0;
    return (left + right) / ((1.0 - alpha) * (b - a));
}

/// Average of |x|^(-beta) over a square cell of side h whose closure contains
/// the origin, clipped to |x| <= trunc.  Polar closed form over the inscribed
/// disk sector plus a midpoint-rule correction for the corner region.
/// `angle_fraction` is the fraction of the full disk inside the cell (1 for a
/// cell centered at the origin, 1/4 when the origin sits at a cell corner);
/// `rho_in` is the largest disk-sector radius contained in the cell.
inline double origin_cell_average_2d(double h, double beta, double trunc, double angle_fraction,
                                     double rho_in) {
    const double rho = std::min(rho_in, trunc);
    if (rho <= 0.0) return 0.0;
    const double sector = angle_fraction * 2.0 * M_PI * std::pow(rho, 2.0 - beta) / (2.0 - beta);
    double corner = 0.0;
    if (trunc > rho_in) {
        // Corner region spans radii [rho_in, rho_in * sqrt(2)].
        const double rho_out = std::min(rho_in * std::sqrt(2.0), trunc);
        const double area = h * h - angle_fraction * M_PI * rho_in * rho_in;
        const double rho_mid = 0.5 * (rho_in + rho_out);
        corner = area * std::pow(rho_mid, -beta);
    }
    return (sector + corner) / (h * h);
}

/// True if the closed cell with the given center contains the origin.
inline bool cell_touches_origin(const Grid& g, std::size_t idx) {
    const auto c = g.center(idx);
    const double half = 0.5 * g.cell_width();
    if (std::abs(c[0]) > half + 1e-12 * half) return false;
    if (g.dim() == 2 && std::abs(c[1]) > half + 1e-12 * half) return false;
    return true;
}

inline SampledFunction materialize_power(const Grid& g, double q_exp, double trunc) {
    if (!(q_exp > 1.0))
        throw domain_error("power kernel: q must exceed 1 for an integrable singularity");
    const double n_over_q = g.dim() / q_exp;
    const double h = g.cell_width();
    std::vector<double> v(g.cell_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (cell_touches_origin(g, i)) {
            if (g.dim() == 1) {
                const double a = g.center(i)[0] - 0.5 * h;
                v[i] = origin_cell_average_1d(a, a + h, n_over_q, trunc);
            } else {
                const auto c = g.center(i);
                // Origin at the cell center (odd grids) or at a corner (even).
                const bool centered = std::abs(c[0]) < 0.25 * h && std::abs(c[1]) < 0.25 * h;
                const double angle_fraction = centered ? 1.0 : 0.25;
                const double rho_in = centered ? 0.5 * h : h;
                v[i] = origin_cell_average_2d(h, n_over_q, trunc, angle_fraction, rho_in);
            }
        } else {
            const double rad = g.center_radius(i);
            v[i] = rad <= trunc ? std::pow(rad, -n_over_q) : 0.0;
        }
    }
    return SampledFunction(g, std::move(v));
}

} // namespace detail

/// Parses the kernel mini-DSL `name:key=value,key=value`.  Unknown names and
/// unknown or repeated keys are rejected.
inline KernelSpec parse_kernel_spec(std::string_view text) {
    const auto colon = text.find(':');
    const std::string name(text.substr(0, colon));
    std::map<std::string, double> num;
    std::map<std::string, std::string> str;
    if (colon != std::string_view::npos) {
        std::stringstream ss{std::string(text.substr(colon + 1))};
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw domain_error("kernel spec: expected key=value, got '" + item + "'");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            if (num.count(key) || str.count(key))
                throw domain_error("kernel spec: repeated key '" + key + "'");
            if (key == "path") {
                str[key] = val;
            } else {
                try {
                    std::size_t pos = 0;
                    num[key] = std::stod(val, &pos);
                    if (pos != val.size()) throw std::invalid_argument(val);
                } catch (const std::exception&) {
                    throw domain_error("kernel spec: non-numeric value '" + val + "' for key '" +
                                       key + "'");
                }
            }
        }
    }
    auto take = [&](const char* key) {
        auto it = num.find(key);
        if (it == num.end())
            throw domain_error("kernel spec '" + name + "': missing key '" + key + "'");
        const double v = it->second;
        num.erase(it);
        detail::require_positive(v, key);
        return v;
    };
    auto finish = [&](KernelSpec spec) {
        if (!num.empty())
            throw domain_error("kernel spec '" + name + "': unknown key '" + num.begin()->first +
                               "'");
        if (!str.empty())
            throw domain_error("kernel spec '" + name + "': unknown key '" + str.begin()->first +
                               "'");
        return spec;
    };
    if (name == "power") return finish(PowerKernel{take("q")});
    if (name == "power_truncated") {
        const double q = take("q");
        return finish(TruncatedPowerKernel{q, take("R")});
    }
    if (name == "power_capped") {
        const double q = take("q");
        return finish(CappedPowerKernel{q, take("M")});
    }
    if (name == "gauss") return finish(GaussianKernel{take("sigma")});
    if (name == "indicator") return finish(IndicatorKernel{take("radius")});
    if (name == "samples") {
        auto it = str.find("path");
        if (it == str.end()) throw domain_error("kernel spec 'samples': missing key 'path'");
        FileKernel k{it->second};
        str.erase(it);
        return finish(std::move(k));
    }
    throw domain_error("kernel spec: unknown kernel '" + name + "'");
}

inline std::string format_kernel_spec(const KernelSpec& spec) {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PowerKernel>)
                os << "power:q=" << k.q_exp;
            else if constexpr (std::is_same_v<T, TruncatedPowerKernel>)
                os << "power_truncated:q=" << k.q_exp << ",R=" << k.radius;
            else if constexpr (std::is_same_v<T, CappedPowerKernel>)
                os << "power_capped:q=" << k.q_exp << ",M=" << k.cap;
            else if constexpr (std::is_same_v<T, GaussianKernel>)
                os << "gauss:sigma=" << k.sigma;
            else if constexpr (std::is_same_v<T, IndicatorKernel>)
                os << "indicator:radius=" << k.radius;
            else
                os << "samples:path=" << k.path;
        },
        spec);
    return os.str();
}

/// Evaluates the kernel at every cell center.  Cells whose closure contains
/// the origin of a singular power kernel carry the exact cell average instead
/// of the (possibly infinite) center value.
inline SampledFunction materialize(const KernelSpec& spec, const Grid& grid) {
    return std::visit(
        [&](const auto& k) -> SampledFunction {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PowerKernel>) {
                detail::require_positive(k.q_exp, "q");
                return detail::materialize_power(grid, k.q_exp,
                                                 std::numeric_limits<double>::infinity());
            } else if constexpr (std::is_same_v<T, TruncatedPowerKernel>) {
                detail::require_positive(k.q_exp, "q");
                detail::require_positive(k.radius, "R");
                return detail::materialize_power(grid, k.q_exp, k.radius);
            } else if constexpr (std::is_same_v<T, CappedPowerKernel>) {
                detail::require_positive(k.q_exp, "q");
                detail::require_positive(k.cap, "M");
                const double n_over_q = grid.dim() / k.q_exp;
                const double cap = k.cap;
                std::vector<double> v(grid.cell_count());
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const double rad = grid.center_radius(i);
                    v[i] = rad == 0.0 ? cap : std::min(cap, std::pow(rad, -n_over_q));
                }
                return SampledFunction(grid, std::move(v));
            } else if constexpr (std::is_same_v<T, GaussianKernel>) {
                detail::require_positive(k.sigma, "sigma");
                const double inv = 1.0 / (2.0 * k.sigma * k.sigma);
                std::vector<double> v(grid.cell_count());
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const double rad = grid.center_radius(i);
                    v[i] = std::exp(-rad * rad * inv);
                }
                return SampledFunction(grid, std::move(v));
            } else if constexpr (std::is_same_v<T, IndicatorKernel>) {
                detail::require_positive(k.radius, "radius");
                std::vector<double> v(grid.cell_count());
                for (std::size_t i = 0; i < v.size(); ++i)
                    v[i] = grid.center_radius(i) <= k.radius ? 1.0 : 0.0;
                return SampledFunction(grid, std::move(v));
            } else {
                return read_samples_csv(k.path, grid);
            }
        },
        spec);
}

} // namespace convmax
