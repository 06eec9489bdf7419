#include <algorithm>
#include <cmath>

#include "iaspa/kernels.hpp"

namespace iaspa::kernels {

namespace {

void acc_max(double* acc, const double* field, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], field[i]);
}

void acc_sum(double* acc, const double* field, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += field[i];
}

double w_log1p(const double* acc, const double* dens, std::size_t n, double cap) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += dens[i] * std::log1p(std::min(acc[i], cap));
    return s;
}

double w_sat(const double* acc, const double* dens, std::size_t n, double c, double cap) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::min(acc[i], cap);
        s += dens[i] * (a / (a + c));
    }
    return s;
}

double g_log1p_max(const double* acc, const double* field, const double* dens, std::size_t n,
                   double cap) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::min(acc[i], cap);
        const double b = std::min(std::max(acc[i], field[i]), cap);
        if (b > a) s += dens[i] * std::log1p((b - a) / (1.0 + a));
    }
    return s;
}

double g_log1p_sum(const double* acc, const double* field, const double* dens, std::size_t n,
                   double cap) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::min(acc[i], cap);
        const double b = std::min(acc[i] + field[i], cap);
        if (b > a) s += dens[i] * std::log1p((b - a) / (1.0 + a));
    }
    return s;
}

double g_sat_max(const double* acc, const double* field, const double* dens, std::size_t n,
                 double c, double cap) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::min(acc[i], cap);
        const double b = std::min(std::max(acc[i], field[i]), cap);
        if (b > a) s += dens[i] * (c * (b - a) / ((b + c) * (a + c)));
    }
    return s;
}

double g_sat_sum(const double* acc, const double* field, const double* dens, std::size_t n,
                 double c, double cap) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::min(acc[i], cap);
        const double b = std::min(acc[i] + field[i], cap);
        if (b > a) s += dens[i] * (c * (b - a) / ((b + c) * (a + c)));
    }
    return s;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar", acc_max, acc_sum, w_log1p, w_sat, g_log1p_max, g_log1p_sum, g_sat_max, g_sat_sum,
    };
    return ops;
}

}  // namespace iaspa::kernels
