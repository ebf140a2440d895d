#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace reldiff {

// streaming mean/variance accumulator; merge is associative
class Welford {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    void merge(const Welford& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double d = o.mean_ - mean_;
        mean_ += d * nb / (na + nb);
        m2_ += o.m2_ + d * d * na * nb / (na + nb);
        n_ += o.n_;
    }
    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double standard_error() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

  private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct Histogram {
    std::vector<double> edges;   // size bins + 1, increasing
    std::vector<double> counts;  // size bins
    std::uint64_t total = 0;
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;

    Histogram() = default;
    Histogram(double lo, double hi, int bins);
    void add(double x);
    void merge(const Histogram& o);
};

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double lower_critical = 0.0;  // two-sided band at the requested level
    double upper_critical = 0.0;
    bool pass = false;
};

// Pearson chi-square of observed counts against expected bin masses
// (normalized to the observed total). Bins with expected count below
// min_expected are pooled with their neighbor. Two-sided test at the given
// significance level.
ChiSquareResult chi_square_test(std::span<const double> observed,
                                std::span<const double> expected_mass, double level,
                                double min_expected = 5.0);

}  // namespace reldiff
