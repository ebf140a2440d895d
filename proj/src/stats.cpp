#include "reldiff/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "reldiff/numerics.hpp"

namespace reldiff {

Histogram::Histogram(double lo, double hi, int bins) {
    if (!(hi > lo) || bins < 1) throw std::invalid_argument("Histogram: bad range or bin count");
    edges.resize(static_cast<std::size_t>(bins) + 1);
    counts.assign(static_cast<std::size_t>(bins), 0.0);
    for (int i = 0; i <= bins; ++i)
        edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
}

void Histogram::add(double x) {
    ++total;
    if (x < edges.front()) {
        ++underflow;
        return;
    }
    if (x >= edges.back()) {
        ++overflow;
        return;
    }
    const double lo = edges.front(), hi = edges.back();
    auto bin = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(counts.size()));
    if (bin >= counts.size()) bin = counts.size() - 1;
    counts[bin] += 1.0;
}

void Histogram::merge(const Histogram& o) {
    if (o.edges != edges) throw std::invalid_argument("Histogram::merge: incompatible edges");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    total += o.total;
    underflow += o.underflow;
    overflow += o.overflow;
}

ChiSquareResult chi_square_test(std::span<const double> observed,
                                std::span<const double> expected_mass, double level,
                                double min_expected) {
    if (observed.size() != expected_mass.size() || observed.empty())
        throw std::invalid_argument("chi_square_test: size mismatch");
    double n = 0.0, mass = 0.0;
    for (double o : observed) n += o;
    for (double m : expected_mass) mass += m;
    if (n <= 0.0 || mass <= 0.0) throw std::invalid_argument("chi_square_test: empty inputs");

    // pool small-expectation bins left to right
    std::vector<double> obs_p, exp_p;
    double co = 0.0, ce = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        co += observed[i];
        ce += expected_mass[i] / mass * n;
        if (ce >= min_expected) {
            obs_p.push_back(co);
            exp_p.push_back(ce);
            co = ce = 0.0;
        }
    }
    if (ce > 0.0 || co > 0.0) {
        if (!exp_p.empty()) {
            obs_p.back() += co;
            exp_p.back() += ce;
        } else {
            obs_p.push_back(co);
            exp_p.push_back(ce);
        }
    }

    ChiSquareResult r;
    for (std::size_t i = 0; i < obs_p.size(); ++i) {
        const double d = obs_p[i] - exp_p[i];
        r.statistic += d * d / exp_p[i];
    }
    r.dof = static_cast<int>(obs_p.size()) - 1;
    if (r.dof < 1) throw std::invalid_argument("chi_square_test: not enough bins after pooling");
    r.lower_critical = chi_square_quantile(0.5 * level, r.dof);
    r.upper_critical = chi_square_quantile(1.0 - 0.5 * level, r.dof);
    r.pass = r.statistic >= r.lower_critical && r.statistic <= r.upper_critical;
    return r;
}

}  // namespace reldiff
