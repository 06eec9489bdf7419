#pragma once

#include <cstddef>
#include <vector>

namespace iaspa {

/// Dense row-major grid of doubles. Row 0 is the southernmost row.
struct Raster {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Raster() = default;
    Raster(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, fill) {}

    std::size_t size() const { return v.size(); }
    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }

    bool same_shape(const Raster& o) const { return rows == o.rows && cols == o.cols; }
};

}  // namespace iaspa
