#include "iaspa/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "iaspa/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary raster payloads are little-endian");

namespace iaspa {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string header_line(const RasterHeader& h) {
    std::string s;
    s += std::to_string(h.rows);
    s += ' ';
    s += std::to_string(h.cols);
    s += ' ';
    s += fmt(h.origin_x);
    s += ' ';
    s += fmt(h.origin_y);
    s += ' ';
    s += fmt(h.spacing);
    s += ' ';
    s += fmt(h.height);
    return s;
}

RasterHeader parse_header(const std::string& line, const std::filesystem::path& path) {
    std::istringstream iss(line);
    RasterHeader h;
    if (!(iss >> h.rows >> h.cols >> h.origin_x >> h.origin_y >> h.spacing >> h.height))
        throw ParseError(path.string() + ": malformed raster header '" + line + "'");
    if (h.rows < 1 || h.cols < 1)
        throw ParseError(path.string() + ": raster header has non-positive dimensions");
    return h;
}

void check_value(double v, std::size_t idx, int cols, bool require_nonneg,
                 const std::filesystem::path& path) {
    const int r = static_cast<int>(idx) / cols;
    const int c = static_cast<int>(idx) % cols;
    if (!std::isfinite(v))
        throw ValidationError(path.string() + ": non-finite value at cell (" + std::to_string(r) +
                              ", " + std::to_string(c) + ")");
    if (require_nonneg && v < 0.0)
        throw ValidationError(path.string() + ": negative value at cell (" + std::to_string(r) +
                              ", " + std::to_string(c) + ")");
}

}  // namespace

RasterHeader header_for(const ReceiverGrid& grid) {
    return {grid.rows, grid.cols, grid.origin.x, grid.origin.y, grid.spacing, grid.height};
}

void require_grid_match(const RasterHeader& h, const ReceiverGrid& grid) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    if (h.rows != grid.rows || h.cols != grid.cols || !close(h.origin_x, grid.origin.x) ||
        !close(h.origin_y, grid.origin.y) || !close(h.spacing, grid.spacing) ||
        !close(h.height, grid.height))
        throw ValidationError("raster header does not match the receiver grid (got " +
                              std::to_string(h.rows) + "x" + std::to_string(h.cols) + " spacing " +
                              fmt(h.spacing) + ", expected " + std::to_string(grid.rows) + "x" +
                              std::to_string(grid.cols) + " spacing " + fmt(grid.spacing) + ")");
}

void write_raster_text(const std::filesystem::path& path, const Raster& r, const RasterHeader& h) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << header_line(h) << '\n';
    for (int row = 0; row < r.rows; ++row) {
        for (int col = 0; col < r.cols; ++col) {
            if (col) out << ' ';
            out << fmt(r.at(row, col));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_raster_binary(const std::filesystem::path& path, const Raster& r, const RasterHeader& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << header_line(h) << '\n' << '\n';
    out.write(reinterpret_cast<const char*>(r.data()),
              static_cast<std::streamsize>(r.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + path.string());
}

LoadedRaster read_raster_text(const std::filesystem::path& path, bool require_nonneg) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    LoadedRaster out;
    out.header = parse_header(line, path);
    out.raster = Raster(out.header.rows, out.header.cols);
    for (std::size_t i = 0; i < out.raster.size(); ++i) {
        if (!(in >> out.raster.v[i]))
            throw ParseError(path.string() + ": expected " + std::to_string(out.raster.size()) +
                             " values, got " + std::to_string(i));
        check_value(out.raster.v[i], i, out.header.cols, require_nonneg, path);
    }
    return out;
}

LoadedRaster read_raster_binary(const std::filesystem::path& path, bool require_nonneg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    LoadedRaster out;
    out.header = parse_header(line, path);
    std::string blank;
    if (!std::getline(in, blank) || !blank.empty())
        throw ParseError(path.string() + ": missing blank line before binary payload");
    out.raster = Raster(out.header.rows, out.header.cols);
    in.read(reinterpret_cast<char*>(out.raster.data()),
            static_cast<std::streamsize>(out.raster.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(out.raster.size() * sizeof(double)))
        throw ParseError(path.string() + ": truncated binary payload");
    for (std::size_t i = 0; i < out.raster.size(); ++i)
        check_value(out.raster.v[i], i, out.header.cols, require_nonneg, path);
    return out;
}

LoadedRaster read_raster_auto(const std::filesystem::path& path, bool require_nonneg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    const int next = in.peek();
    in.close();
    if (next == '\n') return read_raster_binary(path, require_nonneg);
    return read_raster_text(path, require_nonneg);
}

}  // namespace iaspa
