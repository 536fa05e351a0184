#include "ntnsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ntnsim {

double MeanAccumulator::mean() const
{
    return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

double MeanAccumulator::variance() const
{
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    return std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
}

double MeanAccumulator::std_error() const
{
    return count < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
}

double erasure_probability(const std::vector<bool>& erased)
{
    if (erased.empty()) throw std::invalid_argument("erasure_probability: no units");
    const auto n = std::count(erased.begin(), erased.end(), true);
    return static_cast<double>(n) / static_cast<double>(erased.size());
}

double erasure_probability(const std::vector<std::vector<bool>>& erased_per_gateway)
{
    if (erased_per_gateway.empty() || erased_per_gateway.front().empty())
        throw std::invalid_argument("erasure_probability: no units");
    const std::size_t units = erased_per_gateway.front().size();
    std::size_t lost = 0;
    for (std::size_t u = 0; u < units; ++u) {
        bool all = true;
        for (const auto& gw : erased_per_gateway) {
            if (gw.size() != units) throw std::invalid_argument("erasure_probability: ragged input");
            all = all && gw[u];
        }
        lost += all ? 1 : 0;
    }
    return static_cast<double>(lost) / static_cast<double>(units);
}

RadialProfileBuilder::RadialProfileBuilder(double radius_m, std::size_t n_rings)
    : radius_m_(radius_m), rings_(n_rings)
{
    if (n_rings == 0) throw std::invalid_argument("radial profile needs at least one ring");
    if (!(radius_m > 0.0)) throw std::invalid_argument("radial profile needs a positive radius");
}

void RadialProfileBuilder::add(const ErasureSample& s)
{
    const double r = std::hypot(s.position.x, s.position.y);
    const auto n = rings_.size();
    auto i = static_cast<std::size_t>(r / radius_m_ * static_cast<double>(n));
    rings_[std::min(i, n - 1)].add(s.mean_erasure);
}

void RadialProfileBuilder::merge(const RadialProfileBuilder& other)
{
    for (std::size_t i = 0; i < rings_.size(); ++i) rings_[i].merge(other.rings_[i]);
}

std::vector<RadialRing> RadialProfileBuilder::rings() const
{
    std::vector<RadialRing> out;
    const double width = radius_m_ / static_cast<double>(rings_.size());
    for (std::size_t i = 0; i < rings_.size(); ++i) {
        RadialRing ring;
        ring.inner_m = width * static_cast<double>(i);
        ring.outer_m = width * static_cast<double>(i + 1);
        ring.count = rings_[i].count;
        if (ring.count) ring.mean = rings_[i].mean();
        ring.std_error = rings_[i].std_error();
        out.push_back(ring);
    }
    return out;
}

std::vector<RadialRing> radial_profile(std::span<const ErasureSample> samples, std::size_t n_rings,
                                       double radius_m)
{
    RadialProfileBuilder b(radius_m, n_rings);
    for (const auto& s : samples) b.add(s);
    return b.rings();
}

HeatmapGrid::HeatmapGrid(double radius_m, double bin_size_m)
    : radius_m_(radius_m), bin_size_(bin_size_m)
{
    if (!(bin_size_m > 0.0)) throw std::invalid_argument("heatmap bin size must be positive");
    if (!(radius_m > 0.0)) throw std::invalid_argument("heatmap needs a positive radius");
    side_ = static_cast<std::size_t>(std::ceil(2.0 * radius_m / bin_size_m));
    bins_.resize(side_ * side_);
}

void HeatmapGrid::add(const ErasureSample& s)
{
    auto index = [&](double v) {
        const double k = std::floor((v + radius_m_) / bin_size_);
        return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(side_ - 1)));
    };
    Bin& b = bins_[index(s.position.y) * side_ + index(s.position.x)];
    b.sum += s.mean_erasure;
    ++b.count;
}

void HeatmapGrid::merge(const HeatmapGrid& other)
{
    if (other.side_ != side_) throw std::invalid_argument("heatmap grids differ in shape");
    for (std::size_t i = 0; i < bins_.size(); ++i) {
        bins_[i].sum += other.bins_[i].sum;
        bins_[i].count += other.bins_[i].count;
    }
}

double HeatmapGrid::bin_center(std::size_t i) const
{
    return -radius_m_ + (static_cast<double>(i) + 0.5) * bin_size_;
}

std::optional<double> HeatmapGrid::mean(std::size_t ix, std::size_t iy) const
{
    const Bin& b = bins_[iy * side_ + ix];
    if (b.count == 0) return std::nullopt;
    return b.sum / static_cast<double>(b.count);
}

bool HeatmapGrid::touches_disk(std::size_t ix, std::size_t iy) const
{
    // Nearest point of the bin to the origin.
    auto nearest = [&](std::size_t i) {
        const double lo = -radius_m_ + static_cast<double>(i) * bin_size_;
        const double hi = lo + bin_size_;
        return lo > 0.0 ? lo : (hi < 0.0 ? hi : 0.0);
    };
    return std::hypot(nearest(ix), nearest(iy)) <= radius_m_;
}

double HeatmapGrid::weighted_mean() const
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const Bin& b : bins_) {
        sum += b.sum;
        n += b.count;
    }
    return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

HeatmapGrid build_heatmap(std::span<const ErasureSample> samples, double radius_m,
                          double bin_size_m)
{
    HeatmapGrid grid(radius_m, bin_size_m);
    for (const auto& s : samples) grid.add(s);
    return grid;
}

double run_success_rate(std::span<const std::size_t> decoded_per_device,
                        std::span<const std::size_t> packets_per_device)
{
    if (decoded_per_device.size() != packets_per_device.size())
        throw std::invalid_argument("run_success_rate: size mismatch");
    MeanAccumulator acc;
    for (std::size_t i = 0; i < packets_per_device.size(); ++i) {
        if (packets_per_device[i] == 0) continue;
        acc.add(static_cast<double>(decoded_per_device[i]) /
                static_cast<double>(packets_per_device[i]));
    }
    return acc.mean();
}

SuccessPoint success_statistics(std::span<const double> run_means, std::size_t n_devices)
{
    if (run_means.empty()) throw std::invalid_argument("success_statistics: need at least one run");
    MeanAccumulator acc;
    for (double m : run_means)
        if (!std::isnan(m)) acc.add(m);
    SuccessPoint p;
    p.n_devices = n_devices;
    p.runs = acc.count;
    p.mean = acc.mean();
    p.ci95 = 1.959963984540054 * acc.std_error();
    return p;
}

double sorted_quantile(std::span<const double> sorted, double p)
{
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

DistributionSummary distribution_summary(std::vector<double> samples, std::size_t n_bins, double lo,
                                         double hi)
{
    if (samples.empty()) throw std::invalid_argument("distribution_summary: no samples");
    if (n_bins == 0 || !(hi > lo)) throw std::invalid_argument("distribution_summary: bad bins");
    std::sort(samples.begin(), samples.end());

    DistributionSummary s;
    s.count = samples.size();
    s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(s.count);
    s.median = sorted_quantile(samples, 0.5);
    s.q1 = sorted_quantile(samples, 0.25);
    s.q3 = sorted_quantile(samples, 0.75);
    s.min = samples.front();
    s.max = samples.back();
    s.hist_lo = lo;
    s.hist_hi = hi;
    s.density.assign(n_bins, 0.0);

    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (double v : samples) {
        const double k = std::floor((v - lo) / width);
        const auto i = static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n_bins - 1)));
        s.density[i] += 1.0;
    }
    for (double& d : s.density) d /= static_cast<double>(s.count) * width;
    return s;
}

void write_heatmap_csv(std::ostream& out, const HeatmapGrid& grid)
{
    out << std::setprecision(12) << "x_bin_m,y_bin_m,mean_erasure,n,inside_disk\n";
    for (std::size_t iy = 0; iy < grid.bins_per_side(); ++iy) {
        for (std::size_t ix = 0; ix < grid.bins_per_side(); ++ix) {
            out << grid.bin_center(ix) << ',' << grid.bin_center(iy) << ',';
            if (auto m = grid.mean(ix, iy)) out << *m;
            out << ',' << grid.count(ix, iy) << ',' << (grid.touches_disk(ix, iy) ? 1 : 0) << '\n';
        }
    }
}

void write_radial_csv(std::ostream& out, const std::vector<RadialRing>& rings)
{
    out << std::setprecision(12) << "ring_inner_m,ring_outer_m,mean_erasure,n,std_error\n";
    for (const auto& r : rings) {
        out << r.inner_m << ',' << r.outer_m << ',';
        if (r.mean) out << *r.mean;
        out << ',' << r.count << ',' << r.std_error << '\n';
    }
}

void write_violin_stats_csv(std::ostream& out, const DistributionSummary& s)
{
    out << std::setprecision(12) << "stat,value\n"
        << "count," << s.count << '\n'
        << "mean," << s.mean << '\n'
        << "median," << s.median << '\n'
        << "q1," << s.q1 << '\n'
        << "q3," << s.q3 << '\n'
        << "min," << s.min << '\n'
        << "max," << s.max << '\n';
}

void write_violin_hist_csv(std::ostream& out, const DistributionSummary& s)
{
    out << std::setprecision(12) << "bin_lo,bin_hi,density\n";
    const double width = (s.hist_hi - s.hist_lo) / static_cast<double>(s.density.size());
    for (std::size_t i = 0; i < s.density.size(); ++i) {
        const double lo = s.hist_lo + width * static_cast<double>(i);
        out << lo << ',' << lo + width << ',' << s.density[i] << '\n';
    }
}

void write_success_curve_csv(std::ostream& out, std::span<const SuccessPoint> points)
{
    out << std::setprecision(12) << "n_devices,mean,ci95,runs\n";
    for (const auto& p : points) out << p.n_devices << ',' << p.mean << ',' << p.ci95 << ',' << p.runs << '\n';
}

}  // namespace ntnsim
