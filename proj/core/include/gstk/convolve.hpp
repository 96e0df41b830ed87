#pragma once

#include <string_view>
#include <vector>

#include "gstk/kernel.hpp"
#include "gstk/raster.hpp"

namespace gstk {

/// How reads outside the band are resolved.
///   replicate: clamp to the nearest edge sample.
///   reflect:   mirror about the edge with the edge sample repeated
///              (... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...), periodic for any offset.
///   zero:      outside samples read as 0.
enum class BoundaryMode { replicate, reflect, zero };

std::string_view to_string(BoundaryMode m);
BoundaryMode parse_boundary_mode(std::string_view s);

/// Source index for coordinate `i` on an axis of length `n` (n > 0), or -1
/// when the zero boundary applies.
int resolve_coordinate(int i, int n, BoundaryMode mode);

struct ConvolveOptions {
  int workers = 1;     ///< 0 selects std::thread::hardware_concurrency().
  int tile_rows = 64;  ///< output rows per work item
};

/// out(r, c) = sum over kernel cells of k(dcol, drow) * in(r + drow, c + dcol).
/// This is correlation with the template as stored (no kernel flip). Integer
/// arithmetic is exact, so the result does not depend on the options.
/// Throws DomainError for an empty band or when sum|k| * dtype max could
/// overflow a signed 32-bit accumulator.
ResponseField convolve(const Band& band, const Kernel& kernel,
                       BoundaryMode boundary = BoundaryMode::replicate,
                       const ConvolveOptions& options = {});

std::vector<ResponseField> convolve_image(const MultibandImage& image, const Kernel& kernel,
                                          BoundaryMode boundary = BoundaryMode::replicate,
                                          const ConvolveOptions& options = {});

}  // namespace gstk
