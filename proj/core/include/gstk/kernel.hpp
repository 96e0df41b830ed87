#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gstk {

/// Anchor-relative position inside a kernel. `dcol` grows to the right,
/// `drow` grows downwards; -1 is one step toward the decreasing index.
struct Offset {
  int dcol = 0;
  int drow = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Small integer stencil with an anchor cell. Coefficients are stored
/// row-major, top row first, and must fit in 16 signed bits.
class Kernel {
 public:
  static constexpr std::int32_t kMaxMagnitude = 32767;

  /// Throws DomainError when the grid is empty, ragged, the anchor lies
  /// outside it, or a coefficient exceeds 16 signed bits.
  Kernel(int rows, int cols, std::vector<std::int32_t> coeffs, int anchor_row,
         int anchor_col);

  /// Kernel with its anchor at the geometric center; both dimensions must be odd.
  static Kernel centered(int rows, int cols, std::vector<std::int32_t> coeffs);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int anchor_row() const { return anchor_row_; }
  int anchor_col() const { return anchor_col_; }
  const std::vector<std::int32_t>& coeffs() const { return coeffs_; }

  std::int32_t at(int row, int col) const { return coeffs_[row * cols_ + col]; }

  /// Coefficient at an anchor-relative offset; 0 outside the grid.
  std::int32_t at(Offset o) const;

  /// Offsets spanned by the grid: [min_dcol, max_dcol] x [min_drow, max_drow].
  int min_dcol() const { return -anchor_col_; }
  int max_dcol() const { return cols_ - 1 - anchor_col_; }
  int min_drow() const { return -anchor_row_; }
  int max_drow() const { return rows_ - 1 - anchor_row_; }

  bool centered_anchor() const {
    return rows_ % 2 == 1 && cols_ % 2 == 1 && anchor_row_ == rows_ / 2 &&
           anchor_col_ == cols_ / 2;
  }

  std::int64_t abs_sum() const;
  int nonzero_count() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  int rows_;
  int cols_;
  std::vector<std::int32_t> coeffs_;
  int anchor_row_;
  int anchor_col_;
};

/// One-quadrant template obtained by substituting backward differences into
/// the second-order operator d2/dx2 + 2 d2/dxdy + d2/dy2 with unit spacing.
/// The anchor is the bottom-right cell of the returned 3x3 grid.
Kernel derive_quadrant_template();

/// Overlays the four axis reflections of a one-quadrant template:
/// K(i, j) = Q(-|i|, -|j|). Throws DomainError if the input support leaves
/// the (dcol <= 0, drow <= 0) quadrant.
Kernel symmetrize(const Kernel& quadrant);

/// The 5x5 13-point smoothing stencil, symmetrize(derive_quadrant_template()).
Kernel smoothing_template();

/// 3x3 Laplacian with 8 at the center and -1 on all eight neighbours.
Kernel laplacian_template();

/// Sum over cells of k(i, j) * i^p * j^q with (i, j) = (dcol, drow).
std::int64_t moment(const Kernel& k, int p, int q);

/// True when the kernel is unchanged by all eight rotations/reflections of
/// the square about its anchor.
bool is_d4_symmetric(const Kernel& k);

Kernel transpose(const Kernel& k);
Kernel flip_horizontal(const Kernel& k);
Kernel flip_vertical(const Kernel& k);

/// Text form: one row per line, single-space separated integers. An
/// `anchor R C` first line is accepted always and emitted only when the
/// anchor is not the geometric center of an odd-sized grid.
Kernel parse_kernel(std::string_view text);
std::string format_kernel(const Kernel& k);

}  // namespace gstk
