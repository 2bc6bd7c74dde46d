// io.hpp - CSV/JSON output, moving-average smoothing and ordered parallel maps

#pragma once

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "erabi/params.hpp"
#include "erabi/quench.hpp"
#include "erabi/spectrum.hpp"
#include "erabi/wigner.hpp"

namespace erabi {

inline constexpr const char* version_stamp = "erabi 1.0.0";

/// Round-trip decimal form, locale independent.
inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using CsvCell = std::variant<double, long, std::string>;

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path)
    {
        if (!out_) throw std::runtime_error("cannot open " + path);
        row_strings(header);
    }

    void row(const std::vector<CsvCell>& cells)
    {
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (const auto& c : cells) {
            if (const auto* d = std::get_if<double>(&c)) s.push_back(format_number(*d));
            else if (const auto* l = std::get_if<long>(&c)) s.push_back(std::to_string(*l));
            else s.push_back(std::get<std::string>(c));
        }
        row_strings(s);
    }

    void comment(const std::string& line) { out_ << "# " << line << '\n'; }

private:
    void row_strings(const std::vector<std::string>& s)
    {
        for (std::size_t i = 0; i < s.size(); ++i) out_ << (i ? "," : "") << s[i];
        out_ << '\n';
    }
    std::ofstream out_;
};

inline nlohmann::ordered_json params_json(const ModelParams& p)
{
    return {{"omega", p.omega}, {"R", p.R}, {"N", p.N}, {"lambda", p.lambda},
            {"delta", p.delta}, {"mu", p.mu}, {"gamma", p.gamma}};
}

inline void write_json(const std::string& path, const nlohmann::ordered_json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << '\n';
}

/// Eigendecomposition layout: comment header with parameters and sizes, then one row per
/// eigenpair (index, energy, eps, parity label, optional vector in HilbertBasis order).
inline void write_eigen_csv(const std::string& path, const EigenDecomposition& eigs, bool with_vectors)
{
    std::vector<std::string> header{"index", "energy", "eps", "parity"};
    const auto dim = static_cast<Eigen::Index>(eigs.basis().dimension());
    if (with_vectors)
        for (Eigen::Index k = 0; k < dim; ++k) header.push_back("v" + std::to_string(k));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# " << version_stamp << " eigendecomposition\n";
    out << "# params " << params_json(eigs.params()).dump() << '\n';
    out << "# n_max " << eigs.basis().n_max() << " two_j " << eigs.basis().two_j() << " dimension " << dim
        << " count " << eigs.size() << '\n';
    out << "# basis index = (m + j) * (n_max + 1) + n\n";
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        out << i << ',' << format_number(eigs.energy(i)) << ',' << format_number(scaled_energy(eigs.energy(i), eigs.params()))
            << ',' << eigs.label(i);
        if (with_vectors) {
            const Eigen::VectorXd v = eigs.vector(i);
            for (Eigen::Index k = 0; k < dim; ++k) out << ',' << format_number(v[k]);
        }
        out << '\n';
    }
}

inline void write_quench_csv(const std::string& path, const QuenchRecord& r)
{
    CsvWriter w(path, {"t", "P", "Pq", "Pb", "Jx", "Jy", "Jz", "n", "q", "p", "purity"});
    for (std::size_t i = 0; i < r.times.size(); ++i)
        w.row({r.times[i], r.P[i], r.Pq[i], r.Pb[i], r.Jx[i], r.Jy[i], r.Jz[i], r.n[i], r.q[i], r.p[i], r.purity[i]});
}

inline nlohmann::ordered_json averages_json(const QuenchAverages& a)
{
    return {{"P", a.P}, {"Pq", a.Pq}, {"Pb", a.Pb}, {"Jx", a.Jx}, {"Jy", a.Jy},
            {"Jz", a.Jz}, {"n", a.n}, {"q", a.q}, {"p", a.p}};
}

/// Plain matrix CSV: first row "x\p" followed by the p axis, then one row per x value.
inline void write_wigner_csv(const std::string& path, const WignerGrid& g)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x\\p";
    for (double p : g.p_axis) out << ',' << format_number(p);
    out << '\n';
    for (std::size_t i = 0; i < g.x_axis.size(); ++i) {
        out << format_number(g.x_axis[i]);
        for (std::size_t k = 0; k < g.p_axis.size(); ++k)
            out << ',' << format_number(g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
        out << '\n';
    }
}

inline nlohmann::ordered_json wigner_header_json(const WignerGrid& g)
{
    return {{"convention", g.convention == WignerConvention::standard ? "standard" : "scaled"},
            {"size", g.size},
            {"x_min", g.x_axis.front()}, {"x_max", g.x_axis.back()}, {"nx", g.x_axis.size()},
            {"p_min", g.p_axis.front()}, {"p_max", g.p_axis.back()}, {"np", g.p_axis.size()},
            {"integral", g.integral()}, {"aliasing_warning", g.aliasing_warning}};
}

// ---------------------------------------------------------------------------------------------
// Smoothing

/// Centered moving average in x with total window `window` (x units). Near the ends the
/// half-width shrinks to the distance from the boundary so every window stays centered.
/// A zero window returns the input unchanged.
inline std::vector<double> moving_average(const std::vector<double>& x, const std::vector<double>& y, double window)
{
    if (x.size() != y.size()) throw std::invalid_argument("moving_average: size mismatch");
    if (window < 0.0) throw std::invalid_argument("moving_average: negative window");
    if (window == 0.0 || x.empty()) return y;
    const double lo = x.front(), hi = x.back();
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = std::min({0.5 * window, x[i] - lo, hi - x[i]});
        double s = 0.0;
        int c = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (std::abs(x[k] - x[i]) <= h + 1e-12 * std::max(1.0, std::abs(window))) {
                s += y[k];
                ++c;
            }
        }
        out[i] = s / c;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Ordered parallel map

/// Evaluates f(0..count-1) on `workers` threads with a static block partition. Results are
/// returned in index order; an exception in one point is captured in that point's slot.
template <class T>
struct PointResult {
    std::optional<T> value;
    std::string error;
};

template <class T>
std::vector<PointResult<T>> parallel_map(std::size_t count, unsigned workers, const std::function<T(std::size_t)>& f)
{
    std::vector<PointResult<T>> out(count);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    auto run = [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            try {
                out[i].value = f(i);
            } catch (const std::exception& ex) {
                out[i].error = ex.what();
            }
        }
    };
    if (workers == 1) {
        run(0, count);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = std::min(count, w * chunk), e = std::min(count, b + chunk);
        if (b < e) pool.emplace_back(run, b, e);
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace erabi
