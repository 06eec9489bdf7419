#include "iaspa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "iaspa/errors.hpp"
#include "iaspa/kernels.hpp"

namespace iaspa {

std::vector<int> TransmitterSet::all() const {
    std::vector<int> out = fixed;
    out.insert(out.end(), selected.begin(), selected.end());
    return out;
}

bool TransmitterSet::contains(int idx) const {
    return std::find(fixed.begin(), fixed.end(), idx) != fixed.end() ||
           std::find(selected.begin(), selected.end(), idx) != selected.end();
}

namespace {

void require_nonempty(const TransmitterSet& T) {
    if (T.empty()) throw ValidationError("transmitter set is empty");
}

void require_valid(const TransmitterSet& T, std::size_t n_fields) {
    for (int idx : T.all())
        if (idx < 0 || static_cast<std::size_t>(idx) >= n_fields)
            throw ValidationError("transmitter index " + std::to_string(idx) + " out of range");
}

struct Stats {
    double mean = 0, stddev = 0, max = 0;
};

Stats raster_stats(const Raster& r) {
    Stats s;
    const std::size_t n = r.size();
    if (n == 0) return s;
    double sum = 0, mx = r.v[0];
    for (double v : r.v) {
        sum += v;
        mx = std::max(mx, v);
    }
    s.mean = sum / static_cast<double>(n);
    s.max = mx;
    double acc = 0;
    for (double v : r.v) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(n));  // population convention
    return s;
}

}  // namespace

Raster build_aggregate(const TransmitterSet& T, const std::vector<PowerField>& fields,
                       AggMode mode, int rows, int cols) {
    require_valid(T, fields.size());
    Raster agg(rows, cols, 0.0);
    const auto& ops = kernels::active_ops();
    for (int idx : T.all()) {
        const Raster& f = fields[static_cast<std::size_t>(idx)].values;
        if (mode == AggMode::Max)
            ops.accumulate_max(agg.data(), f.data(), agg.size());
        else
            ops.accumulate_sum(agg.data(), f.data(), agg.size());
    }
    return agg;
}

double aggregate_at(std::size_t cell, const TransmitterSet& T,
                    const std::vector<PowerField>& fields, AggMode mode) {
    require_nonempty(T);
    require_valid(T, fields.size());
    double mx = 0, sum = 0;
    bool first = true;
    for (int idx : T.all()) {
        const double v = fields[static_cast<std::size_t>(idx)].values.v[cell];
        sum += v;
        mx = first ? v : std::max(mx, v);
        first = false;
    }
    return mode == AggMode::Max ? mx : sum;
}

double sinr_at(std::size_t cell, const TransmitterSet& T, const std::vector<PowerField>& fields,
               const RadioConfig& radio) {
    require_nonempty(T);
    const double mx = aggregate_at(cell, T, fields, AggMode::Max);
    const double sum = aggregate_at(cell, T, fields, AggMode::Sum);
    return mx / (sum - mx + radio.noise_power);
}

double interference_at(std::size_t cell, const TransmitterSet& T,
                       const std::vector<PowerField>& fields) {
    require_nonempty(T);
    const double mx = aggregate_at(cell, T, fields, AggMode::Max);
    const double sum = aggregate_at(cell, T, fields, AggMode::Sum);
    return sum - mx;
}

double shannon_rate(double q, const RadioConfig& radio) {
    return radio.bandwidth_hz * std::log2(1.0 + q / radio.gap_gamma);
}

double noise_floor_watts(double bandwidth_hz) {
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz);
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw ValidationError("percentile of empty sample");
    p = std::clamp(p, 0.0, 1.0);
    const std::size_t n = values.size();
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    std::nth_element(values.begin(), values.begin() + static_cast<long>(lo), values.end());
    const double vlo = values[lo];
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || lo + 1 >= n) return vlo;
    // Smallest element above position lo: the remainder is unsorted.
    const double vhi = *std::min_element(values.begin() + static_cast<long>(lo) + 1, values.end());
    return vlo + frac * (vhi - vlo);
}

MetricsReport report(const TransmitterSet& T, const std::vector<PowerField>& fields,
                     const RadioConfig& radio, AggMode mode) {
    require_nonempty(T);
    require_valid(T, fields.size());
    if (fields.empty()) throw ValidationError("no fields");

    const int rows = fields[0].values.rows, cols = fields[0].values.cols;
    MetricsReport rep;
    rep.mode = mode;
    rep.rate_bps = Raster(rows, cols);

    if (mode == AggMode::Max) {
        const Raster mx = build_aggregate(T, fields, AggMode::Max, rows, cols);
        const Raster sum = build_aggregate(T, fields, AggMode::Sum, rows, cols);
        rep.has_interference = true;
        rep.interference_nw = Raster(rows, cols);
        const double nw_scale = noise_floor_watts(radio.bandwidth_hz) * 1e9;
        for (std::size_t i = 0; i < mx.size(); ++i) {
            const double q = mx.v[i] / (sum.v[i] - mx.v[i] + radio.noise_power);
            rep.rate_bps.v[i] = shannon_rate(q, radio);
            rep.interference_nw.v[i] = (sum.v[i] - mx.v[i]) * nw_scale;
        }
    } else {
        const Raster agg = build_aggregate(T, fields, AggMode::Sum, rows, cols);
        for (std::size_t i = 0; i < agg.size(); ++i)
            rep.rate_bps.v[i] = shannon_rate(agg.v[i], radio);
    }

    const Stats rs = raster_stats(rep.rate_bps);
    rep.mean_rate = rs.mean;
    rep.std_rate = rs.stddev;
    rep.max_rate = rs.max;
    rep.edge_rate_p5 = percentile(rep.rate_bps.v, 0.05);
    if (rep.has_interference) {
        const Stats is = raster_stats(rep.interference_nw);
        rep.mean_interf_nw = is.mean;
        rep.std_interf_nw = is.stddev;
        rep.max_interf_nw = is.max;
    }
    return rep;
}

MetricsReport multi_height_report(const std::vector<double>& heights, const TransmitterSet& T,
                                  const CandidateSet& candidates, const Scene& scene,
                                  const RadioConfig& radio, AggMode mode, FieldCache* cache,
                                  int workers) {
    if (heights.empty()) throw ValidationError("height list is empty");
    require_nonempty(T);

    MetricsReport avg;
    bool first = true;
    for (double h : heights) {
        Scene s = scene;
        s.receiver_height = h;
        const ReceiverGrid grid = make_grid(s);
        const auto fields = field_matrix(candidates, s, grid, radio, cache, workers);
        MetricsReport rep = report(T, fields, radio, mode);
        if (first) {
            avg = std::move(rep);
            first = false;
            continue;
        }
        for (std::size_t i = 0; i < avg.rate_bps.size(); ++i)
            avg.rate_bps.v[i] += rep.rate_bps.v[i];
        if (avg.has_interference)
            for (std::size_t i = 0; i < avg.interference_nw.size(); ++i)
                avg.interference_nw.v[i] += rep.interference_nw.v[i];
    }
    const double inv = 1.0 / static_cast<double>(heights.size());
    for (double& v : avg.rate_bps.v) v *= inv;
    if (avg.has_interference)
        for (double& v : avg.interference_nw.v) v *= inv;

    const Stats rs = raster_stats(avg.rate_bps);
    avg.mean_rate = rs.mean;
    avg.std_rate = rs.stddev;
    avg.max_rate = rs.max;
    avg.edge_rate_p5 = percentile(avg.rate_bps.v, 0.05);
    if (avg.has_interference) {
        const Stats is = raster_stats(avg.interference_nw);
        avg.mean_interf_nw = is.mean;
        avg.std_interf_nw = is.stddev;
        avg.max_interf_nw = is.max;
    }
    return avg;
}

std::string report_to_text(const MetricsReport& rep) {
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "iaspa report v1\n";
    out << "mode " << (rep.mode == AggMode::Max ? "MAX" : "SUM") << "\n";
    out << "cells " << rep.rate_bps.size() << "\n";
    out << "mean_rate_bps " << fmt(rep.mean_rate) << "\n";
    out << "std_rate_bps " << fmt(rep.std_rate) << "\n";
    out << "max_rate_bps " << fmt(rep.max_rate) << "\n";
    out << "edge_rate_p5_bps " << fmt(rep.edge_rate_p5) << "\n";
    if (rep.has_interference) {
        out << "mean_interference_nw " << fmt(rep.mean_interf_nw) << "\n";
        out << "std_interference_nw " << fmt(rep.std_interf_nw) << "\n";
        out << "max_interference_nw " << fmt(rep.max_interf_nw) << "\n";
    }
    return out.str();
}

}  // namespace iaspa
