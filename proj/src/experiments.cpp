#include "hheat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "hheat/errors.hpp"
#include "hheat/observables.hpp"

namespace hheat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Evaluates fn(0..count-1); results land at their own index regardless of completion order.
template <class T>
std::vector<T> map_points(std::size_t count, bool parallel, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(count);
    const std::size_t workers = parallel ? std::max(1U, std::thread::hardware_concurrency()) : 1U;
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    for (std::size_t begin = 0; begin < count; begin += workers) {
        const std::size_t end = std::min(count, begin + workers);
        std::vector<std::future<T>> batch;
        for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, fn, i));
        for (std::size_t i = begin; i < end; ++i) out[i] = batch[i - begin].get();
    }
    return out;
}

struct NumericPoint {
    double J = kNaN;
    double residual = kNaN;
};

NumericPoint numeric_current(const LatticeSpec& spec, const SweepOptions& options) {
    const Lattice lattice(spec.dims);
    if (lattice.size() > options.numeric_cap) return {};
    const GeneratorParts G = build_lattice_generator(spec);
    const SteadyState ss = solve_steady_state(G, options.solver);
    return {boundary_current(ss.C, G, BathSide::Hot), ss.residual};
}

double formula_current(const LatticeSpec& spec) {
    return lattice_current(spec.dims, chain_current(spec.dims.back(), ChainParams::from_spec(spec)));
}

void attach_fit(SweepResult& r, const SweepOptions& options) {
    if (options.fit_window) {
        r.fit = fit_loglog(r.values, r.J, options.fit_window->first, options.fit_window->second);
    }
}

}  // namespace

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
    if (x.size() != y.size()) throw DimensionError("fit_loglog: x and y differ in length");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_loglog: values must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 2) throw DomainError("fit_loglog: need at least two points in the window");

    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw DomainError("fit_loglog: window holds a single distinct x value");

    LogLogFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    fit.lo = lo;
    fit.hi = hi;
    fit.points = static_cast<int>(lx.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

SweepResult sweep_length(const LatticeSpec& base, const std::vector<int>& lengths, const SweepOptions& options) {
    require_valid(base);
    for (int n : lengths) {
        if (n < 3) throw DomainError("sweep_length: lengths must be >= 3");
    }
    const auto with_length = [&](std::size_t i) {
        LatticeSpec s = base;
        s.dims.back() = lengths[i];
        return s;
    };
    const auto points = map_points<NumericPoint>(lengths.size(), options.parallel,
                                                 [&](std::size_t i) { return numeric_current(with_length(i), options); });

    SweepResult r;
    r.axis = "length";
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        r.values.push_back(lengths[i]);
        r.J.push_back(formula_current(with_length(i)));
        r.J_num.push_back(points[i].J);
        r.residual.push_back(points[i].residual);
    }
    attach_fit(r, options);
    return r;
}

SweepResult sweep_dephasing(const LatticeSpec& base, const std::vector<double>& rates, const SweepOptions& options) {
    require_valid(base);
    for (double g : rates) {
        if (!(g >= 0.0)) throw DomainError("sweep_dephasing: rates must be >= 0");
    }
    const auto with_rate = [&](std::size_t i) {
        LatticeSpec s = base;
        s.dephasing_rate = rates[i];
        return s;
    };
    const auto points = map_points<NumericPoint>(rates.size(), options.parallel,
                                                 [&](std::size_t i) { return numeric_current(with_rate(i), options); });

    SweepResult r;
    r.axis = "dephasing";
    for (std::size_t i = 0; i < rates.size(); ++i) {
        r.values.push_back(rates[i]);
        r.J.push_back(formula_current(with_rate(i)));
        r.J_num.push_back(points[i].J);
        r.residual.push_back(points[i].residual);
    }
    attach_fit(r, options);
    return r;
}

std::vector<Profile> profile_study(const LatticeSpec& chain, const std::vector<double>& rates,
                                   const SweepOptions& options) {
    require_valid(chain);
    if (chain.dims.size() != 1) throw DomainError("profile_study: expects a chain");
    const int n = chain.dims[0];
    return map_points<Profile>(rates.size(), options.parallel, [&](std::size_t i) {
        LatticeSpec s = chain;
        s.dephasing_rate = rates[i];
        Profile p;
        p.dephasing = rates[i];
        MomentMatrix C;
        if (n <= options.numeric_cap) {
            C = solve_steady_state(build_chain_generator(s), options.solver).C;
            p.numeric = true;
        } else {
            C = chain_closed_form_dephased(n, ChainParams::from_spec(s)).moment_matrix();
        }
        p.occupation = occupation_profile(C);
        p.temperature = effective_temperatures(C, s.omega);
        return p;
    });
}

std::vector<DimensionRow> dimension_study(const LatticeSpec& base, const std::vector<std::vector<int>>& dims_list,
                                          const SweepOptions& options) {
    return map_points<DimensionRow>(dims_list.size(), options.parallel, [&](std::size_t i) {
        LatticeSpec s = base;
        s.dims = dims_list[i];
        require_valid(s);
        DimensionRow row;
        row.dims = s.dims;

        const int n = s.dims.back();
        double chain_J = 0.0;
        if (n >= 3) {
            chain_J = chain_current(n, ChainParams::from_spec(s));
        } else {
            LatticeSpec c = s;
            c.dims = {n};
            const GeneratorParts G = build_chain_generator(c);
            chain_J = boundary_current(solve_steady_state(G, options.solver).C, G, BathSide::Hot);
        }
        row.J_formula = lattice_current(s.dims, chain_J);

        const Lattice lattice(s.dims);
        if (lattice.size() > options.numeric_cap) {
            row.J_num = row.q_norm = row.residual = kNaN;
            return row;
        }
        const GeneratorParts G = build_lattice_generator(s);
        const SteadyState ss = solve_steady_state(G, options.solver);
        row.J_num = boundary_current(ss.C, G, BathSide::Hot);
        row.q_norm = lattice.dimension() >= 2 ? transverse_coherence_norm(ss.C, lattice) : 0.0;
        row.residual = ss.residual;
        return row;
    });
}

std::string dims_label(const std::vector<int>& dims) {
    std::ostringstream out;
    for (std::size_t k = 0; k < dims.size(); ++k) out << (k ? "x" : "") << dims[k];
    return out.str();
}

}  // namespace hheat
