#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ntnsim/geometry.hpp"

namespace ntnsim {

// Average erasure of one device's units during one run.
struct ErasureSample {
    Point2 position;
    double mean_erasure = 0.0;
};

struct MeanAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double x)
    {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    void merge(const MeanAccumulator& o)
    {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    double mean() const;
    double variance() const;  // unbiased; 0 below two samples
    double std_error() const;
};

// Fraction of erased units. Throws std::invalid_argument when empty.
double erasure_probability(const std::vector<bool>& erased);

// Multi-gateway form, indexed [gateway][unit]: a unit is lost only when it is
// erased at every gateway.
double erasure_probability(const std::vector<std::vector<bool>>& erased_per_gateway);

struct RadialRing {
    double inner_m = 0.0;
    double outer_m = 0.0;
    std::optional<double> mean;  // empty ring: no value
    std::size_t count = 0;
    double std_error = 0.0;
};

// Equal-width rings over [0, radius]; samples beyond radius land in the last ring.
class RadialProfileBuilder {
public:
    RadialProfileBuilder(double radius_m, std::size_t n_rings);

    void add(const ErasureSample& s);
    void merge(const RadialProfileBuilder& other);
    std::vector<RadialRing> rings() const;

private:
    double radius_m_;
    std::vector<MeanAccumulator> rings_;
};

std::vector<RadialRing> radial_profile(std::span<const ErasureSample> samples, std::size_t n_rings,
                                       double radius_m);

/**
 * Square bins tiling [-R, R]^2. Bins that never receive a sample report no
 * mean; bins lying entirely outside the disk are flagged as such.
 */
class HeatmapGrid {
public:
    HeatmapGrid(double radius_m, double bin_size_m);

    void add(const ErasureSample& s);
    void merge(const HeatmapGrid& other);

    std::size_t bins_per_side() const { return side_; }
    double bin_size() const { return bin_size_; }
    double bin_center(std::size_t i) const;
    std::size_t count(std::size_t ix, std::size_t iy) const { return bins_[iy * side_ + ix].count; }
    std::optional<double> mean(std::size_t ix, std::size_t iy) const;
    bool touches_disk(std::size_t ix, std::size_t iy) const;
    // Count-weighted mean over all bins.
    double weighted_mean() const;

private:
    double radius_m_;
    double bin_size_;
    std::size_t side_;
    struct Bin {
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::vector<Bin> bins_;
};

HeatmapGrid build_heatmap(std::span<const ErasureSample> samples, double radius_m,
                          double bin_size_m);

struct SuccessPoint {
    std::size_t n_devices = 0;
    double mean = 0.0;
    double ci95 = 0.0;  // normal-approximation half-width over run means
    std::size_t runs = 0;
};

// Mean over devices of decoded/sent; devices that sent nothing are skipped.
// NaN when no device sent anything.
double run_success_rate(std::span<const std::size_t> decoded_per_device,
                        std::span<const std::size_t> packets_per_device);

// Aggregates per-run success rates; NaN runs are skipped.
SuccessPoint success_statistics(std::span<const double> run_means, std::size_t n_devices);

struct DistributionSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;  // midpoint convention for even counts
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
    double hist_lo = 0.0;
    double hist_hi = 1.0;
    std::vector<double> density;  // integrates to 1 over [hist_lo, hist_hi]

    double iqr() const { return q3 - q1; }
};

// Linear-interpolation quantile of already sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

DistributionSummary distribution_summary(std::vector<double> samples, std::size_t n_bins = 50,
                                         double lo = 0.0, double hi = 1.0);

void write_heatmap_csv(std::ostream& out, const HeatmapGrid& grid);
void write_radial_csv(std::ostream& out, const std::vector<RadialRing>& rings);
void write_violin_stats_csv(std::ostream& out, const DistributionSummary& s);
void write_violin_hist_csv(std::ostream& out, const DistributionSummary& s);
void write_success_curve_csv(std::ostream& out, std::span<const SuccessPoint> points);

}  // namespace ntnsim
