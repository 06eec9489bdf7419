#pragma once

#include <filesystem>
#include <string>

#include "iaspa/raster.hpp"
#include "iaspa/scene.hpp"

namespace iaspa {

/// Raster exchange format. Text: one header line
///   rows cols origin_x origin_y spacing height
/// followed by rows x cols whitespace-separated values in row-major order.
/// Binary sibling: the same header line, a blank line, then rows*cols
/// little-endian 64-bit floats.
///
/// Payloads are linear SNR for power fields, bit/s for rate rasters, nW for
/// interference rasters, unit mass for densities.

struct RasterHeader {
    int rows = 0, cols = 0;
    double origin_x = 0, origin_y = 0;
    double spacing = 0, height = 0;
};

RasterHeader header_for(const ReceiverGrid& grid);

/// Throws ValidationError if the header does not match the grid.
void require_grid_match(const RasterHeader& h, const ReceiverGrid& grid);

void write_raster_text(const std::filesystem::path& path, const Raster& r, const RasterHeader& h);
void write_raster_binary(const std::filesystem::path& path, const Raster& r, const RasterHeader& h);

struct LoadedRaster {
    RasterHeader header;
    Raster raster;
};

/// `require_nonneg` additionally rejects negative values; NaN/inf are always
/// rejected, naming the offending cell.
LoadedRaster read_raster_text(const std::filesystem::path& path, bool require_nonneg);
LoadedRaster read_raster_binary(const std::filesystem::path& path, bool require_nonneg);

/// Auto-detects text vs binary by probing the byte after the header line.
LoadedRaster read_raster_auto(const std::filesystem::path& path, bool require_nonneg);

}  // namespace iaspa
