#pragma once

#include <cstddef>
#include <vector>

namespace iaspa::kernels {

/// Data-parallel inner loops of the placement pipeline. `acc` is the running
/// aggregate raster for the current transmitter set, `field` a candidate's
/// power field, `dens` the priority density. All arrays have length n and
/// non-negative entries; `cap` is the utility bound M (values are clamped to
/// it before the weight is applied).
///
/// The gain kernels evaluate sum_i dens[i] * (Wbar(b_i) - Wbar(a_i)) with
/// a_i = min(acc[i], cap) and b_i = min(agg(acc[i], field[i]), cap), where
/// agg is max or +. Differences are computed in cancellation-free form:
///   log1p:      Wbar(b)-Wbar(a) = log1p((b-a) / (1+a))
///   saturating: Wbar(b)-Wbar(a) = c*(b-a) / ((b+c)*(a+c))
struct Ops {
    const char* name;

    void (*accumulate_max)(double* acc, const double* field, std::size_t n);
    void (*accumulate_sum)(double* acc, const double* field, std::size_t n);

    double (*weighted_log1p_sum)(const double* acc, const double* dens, std::size_t n, double cap);
    double (*weighted_saturating_sum)(const double* acc, const double* dens, std::size_t n,
                                      double c, double cap);

    double (*gain_log1p_max)(const double* acc, const double* field, const double* dens,
                             std::size_t n, double cap);
    double (*gain_log1p_sum)(const double* acc, const double* field, const double* dens,
                             std::size_t n, double cap);
    double (*gain_saturating_max)(const double* acc, const double* field, const double* dens,
                                  std::size_t n, double c, double cap);
    double (*gain_saturating_sum)(const double* acc, const double* field, const double* dens,
                                  std::size_t n, double c, double cap);
};

/// Portable reference implementation.
const Ops& scalar_ops();

/// True if this CPU can run the AVX2 variants.
bool avx2_supported();

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
const Ops& avx2_ops();
#endif

/// Variant used by the library. Selected once per process: the
/// IASPA_KERNELS environment variable ("scalar" or "avx2") overrides the
/// CPU-feature default. Fixed selection keeps runs on one machine
/// deterministic regardless of thread count.
const Ops& active_ops();

/// Every variant this CPU can execute (for equivalence tests).
std::vector<const Ops*> supported_ops();

}  // namespace iaspa::kernels
