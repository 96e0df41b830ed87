#include "gstk/convolve.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gstk/error.hpp"

namespace gstk {

std::string_view to_string(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::replicate: return "replicate";
    case BoundaryMode::reflect: return "reflect";
    case BoundaryMode::zero: return "zero";
  }
  return "replicate";
}

BoundaryMode parse_boundary_mode(std::string_view s) {
  if (s == "replicate") return BoundaryMode::replicate;
  if (s == "reflect") return BoundaryMode::reflect;
  if (s == "zero") return BoundaryMode::zero;
  throw DomainError("unknown boundary mode '" + std::string(s) + "'");
}

int resolve_coordinate(int i, int n, BoundaryMode mode) {
  if (i >= 0 && i < n) return i;
  switch (mode) {
    case BoundaryMode::zero:
      return -1;
    case BoundaryMode::replicate:
      return i < 0 ? 0 : n - 1;
    case BoundaryMode::reflect: {
      const long long period = 2LL * n;
      long long m = i % period;
      if (m < 0) m += period;
      return static_cast<int>(m < n ? m : period - 1 - m);
    }
  }
  return -1;
}

namespace {

struct Tap {
  int kernel_row;
  int kernel_col;
  std::int32_t weight;
};

class TiledConvolver {
 public:
  TiledConvolver(const Band& band, const Kernel& kernel, BoundaryMode boundary)
      : band_(band), kernel_(kernel), boundary_(boundary) {
    for (int r = 0; r < kernel.rows(); ++r)
      for (int c = 0; c < kernel.cols(); ++c)
        if (kernel.at(r, c) != 0) taps_.push_back({r, c, kernel.at(r, c)});

    padded_width_ = band.width() + kernel.cols() - 1;
    col_map_.resize(std::size_t(padded_width_));
    for (int p = 0; p < padded_width_; ++p)
      col_map_[std::size_t(p)] = resolve_coordinate(p + kernel.min_dcol(), band.width(), boundary);
  }

  void run_tile(int row_begin, int row_end, ResponseField& out,
                std::vector<std::int32_t>& scratch) const {
    const int width = band_.width();
    const int window = row_end - row_begin + kernel_.rows() - 1;
    scratch.assign(std::size_t(window) * padded_width_, 0);

    for (int w = 0; w < window; ++w) {
      const int src = resolve_coordinate(row_begin + kernel_.min_drow() + w, band_.height(), boundary_);
      if (src < 0) continue;
      const auto row = band_.row(src);
      auto* dst = scratch.data() + std::size_t(w) * padded_width_;
      for (int p = 0; p < padded_width_; ++p) {
        const int c = col_map_[std::size_t(p)];
        dst[p] = c < 0 ? 0 : row[std::size_t(c)];
      }
    }

    for (int r = row_begin; r < row_end; ++r) {
      std::int32_t* acc = out.samples.data() + std::size_t(r) * width;
      std::fill(acc, acc + width, 0);
      for (const auto& t : taps_) {
        const std::int32_t* src =
            scratch.data() + std::size_t(r - row_begin + t.kernel_row) * padded_width_ + t.kernel_col;
        const std::int32_t wgt = t.weight;
        for (int c = 0; c < width; ++c) acc[c] += wgt * src[c];
      }
    }
  }

 private:
  const Band& band_;
  const Kernel& kernel_;
  BoundaryMode boundary_;
  std::vector<Tap> taps_;
  int padded_width_ = 0;
  std::vector<int> col_map_;
};

}  // namespace

ResponseField convolve(const Band& band, const Kernel& kernel, BoundaryMode boundary,
                       const ConvolveOptions& options) {
  if (band.empty()) throw DomainError("convolve: empty band");
  if (kernel.abs_sum() * std::int64_t(max_value(band.dtype())) >
      std::numeric_limits<std::int32_t>::max())
    throw DomainError("convolve: kernel magnitude can overflow 32-bit accumulation for " +
                      std::string(to_string(band.dtype())) + " input");
  if (options.tile_rows <= 0) throw DomainError("convolve: tile_rows must be positive");
  if (options.workers < 0) throw DomainError("convolve: workers must be non-negative");

  ResponseField out(band.width(), band.height());
  const TiledConvolver engine(band, kernel, boundary);
  const int tiles = (band.height() + options.tile_rows - 1) / options.tile_rows;
  int workers = options.workers == 0 ? int(std::max(1u, std::thread::hardware_concurrency()))
                                     : options.workers;
  workers = std::min(workers, tiles);

  std::atomic<int> next{0};
  auto work = [&] {
    std::vector<std::int32_t> scratch;
    for (int t = next++; t < tiles; t = next++) {
      const int begin = t * options.tile_rows;
      engine.run_tile(begin, std::min(begin + options.tile_rows, band.height()), out, scratch);
    }
  };

  if (workers <= 1) {
    work();
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(std::size_t(workers));
    for (int i = 0; i < workers; ++i) {
      pool.emplace_back([&] {
        try {
          work();
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = tiles;
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<ResponseField> convolve_image(const MultibandImage& image, const Kernel& kernel,
                                          BoundaryMode boundary, const ConvolveOptions& options) {
  std::vector<ResponseField> out;
  out.reserve(std::size_t(image.band_count()));
  for (const auto& b : image.bands()) out.push_back(convolve(b, kernel, boundary, options));
  return out;
}

}  // namespace gstk
