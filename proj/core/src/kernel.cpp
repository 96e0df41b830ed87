#include "gstk/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "gstk/error.hpp"

namespace gstk {

Kernel::Kernel(int rows, int cols, std::vector<std::int32_t> coeffs, int anchor_row,
               int anchor_col)
    : rows_(rows),
      cols_(cols),
      coeffs_(std::move(coeffs)),
      anchor_row_(anchor_row),
      anchor_col_(anchor_col) {
  if (rows_ <= 0 || cols_ <= 0) throw DomainError("kernel: dimensions must be positive");
  if (coeffs_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_))
    throw DomainError("kernel: coefficient count does not match rows x cols");
  if (anchor_row_ < 0 || anchor_row_ >= rows_ || anchor_col_ < 0 || anchor_col_ >= cols_)
    throw DomainError("kernel: anchor outside the grid");
  for (auto c : coeffs_) {
    if (c > kMaxMagnitude || c < -kMaxMagnitude - 1)
      throw DomainError("kernel: coefficient " + std::to_string(c) +
                        " does not fit in 16 signed bits");
  }
}

Kernel Kernel::centered(int rows, int cols, std::vector<std::int32_t> coeffs) {
  if (rows % 2 == 0 || cols % 2 == 0)
    throw DomainError("kernel: even dimensions need an explicit anchor");
  return Kernel(rows, cols, std::move(coeffs), rows / 2, cols / 2);
}

std::int32_t Kernel::at(Offset o) const {
  const int r = anchor_row_ + o.drow;
  const int c = anchor_col_ + o.dcol;
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) return 0;
  return at(r, c);
}

std::int64_t Kernel::abs_sum() const {
  std::int64_t s = 0;
  for (auto c : coeffs_) s += std::abs(static_cast<std::int64_t>(c));
  return s;
}

int Kernel::nonzero_count() const {
  return static_cast<int>(std::count_if(coeffs_.begin(), coeffs_.end(),
                                        [](std::int32_t c) { return c != 0; }));
}

Kernel derive_quadrant_template() {
  // Backward differences at (x_n, y_m), h = 1:
  //   fxx = f(n) - 2 f(n-1) + f(n-2)           (x direction)
  //   fyy = f(m) - 2 f(m-1) + f(m-2)           (y direction)
  //   fxy = f(n,m) - f(n-1,m) - f(n,m-1) + f(n-1,m-1)
  // fxx + 2 fxy + fyy collects into the table below.
  struct Term {
    Offset at;
    std::int32_t weight;
  };
  constexpr Term fxx[] = {{{0, 0}, 1}, {{-1, 0}, -2}, {{-2, 0}, 1}};
  constexpr Term fyy[] = {{{0, 0}, 1}, {{0, -1}, -2}, {{0, -2}, 1}};
  constexpr Term fxy[] = {{{0, 0}, 1}, {{-1, 0}, -1}, {{0, -1}, -1}, {{-1, -1}, 1}};

  std::vector<std::int32_t> grid(9, 0);
  auto add = [&grid](const Term& t, std::int32_t scale) {
    grid[(2 + t.at.drow) * 3 + (2 + t.at.dcol)] += scale * t.weight;
  };
  for (const auto& t : fxx) add(t, 1);
  for (const auto& t : fyy) add(t, 1);
  for (const auto& t : fxy) add(t, 2);
  return Kernel(3, 3, std::move(grid), 2, 2);
}

Kernel symmetrize(const Kernel& quadrant) {
  int reach = 0;
  for (int r = 0; r < quadrant.rows(); ++r) {
    for (int c = 0; c < quadrant.cols(); ++c) {
      if (quadrant.at(r, c) == 0) continue;
      const int dcol = c - quadrant.anchor_col();
      const int drow = r - quadrant.anchor_row();
      if (dcol > 0 || drow > 0)
        throw DomainError("symmetrize: support must lie in the dcol <= 0, drow <= 0 quadrant");
      reach = std::max({reach, -dcol, -drow});
    }
  }
  const int side = 2 * reach + 1;
  std::vector<std::int32_t> out(static_cast<std::size_t>(side) * side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const int i = c - reach;
      const int j = r - reach;
      out[r * side + c] = quadrant.at(Offset{-std::abs(i), -std::abs(j)});
    }
  }
  return Kernel(side, side, std::move(out), reach, reach);
}

Kernel smoothing_template() { return symmetrize(derive_quadrant_template()); }

Kernel laplacian_template() {
  return Kernel::centered(3, 3, {-1, -1, -1, -1, 8, -1, -1, -1, -1});
}

std::int64_t moment(const Kernel& k, int p, int q) {
  if (p < 0 || q < 0) throw DomainError("moment: exponents must be non-negative");
  auto ipow = [](std::int64_t base, int e) {
    std::int64_t v = 1;
    while (e-- > 0) v *= base;
    return v;
  };
  std::int64_t sum = 0;
  for (int r = 0; r < k.rows(); ++r) {
    for (int c = 0; c < k.cols(); ++c) {
      const std::int64_t i = c - k.anchor_col();
      const std::int64_t j = r - k.anchor_row();
      sum += k.at(r, c) * ipow(i, p) * ipow(j, q);
    }
  }
  return sum;
}

Kernel transpose(const Kernel& k) {
  std::vector<std::int32_t> out(k.coeffs().size());
  for (int r = 0; r < k.rows(); ++r)
    for (int c = 0; c < k.cols(); ++c) out[c * k.rows() + r] = k.at(r, c);
  return Kernel(k.cols(), k.rows(), std::move(out), k.anchor_col(), k.anchor_row());
}

Kernel flip_horizontal(const Kernel& k) {
  std::vector<std::int32_t> out(k.coeffs().size());
  for (int r = 0; r < k.rows(); ++r)
    for (int c = 0; c < k.cols(); ++c) out[r * k.cols() + (k.cols() - 1 - c)] = k.at(r, c);
  return Kernel(k.rows(), k.cols(), std::move(out), k.anchor_row(),
                k.cols() - 1 - k.anchor_col());
}

Kernel flip_vertical(const Kernel& k) {
  std::vector<std::int32_t> out(k.coeffs().size());
  for (int r = 0; r < k.rows(); ++r)
    for (int c = 0; c < k.cols(); ++c) out[(k.rows() - 1 - r) * k.cols() + c] = k.at(r, c);
  return Kernel(k.rows(), k.cols(), std::move(out), k.rows() - 1 - k.anchor_row(),
                k.anchor_col());
}

bool is_d4_symmetric(const Kernel& k) {
  // Compare on offsets so grids that only differ in zero padding still match.
  const int reach = std::max({-k.min_dcol(), k.max_dcol(), -k.min_drow(), k.max_drow()});
  for (int j = -reach; j <= reach; ++j) {
    for (int i = -reach; i <= reach; ++i) {
      const auto v = k.at(Offset{i, j});
      const Offset images[] = {{-i, j}, {i, -j}, {-i, -j}, {j, i}, {-j, i}, {j, -i}, {-j, -i}};
      for (const auto& o : images)
        if (k.at(o) != v) return false;
    }
  }
  return true;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::int32_t parse_int(std::string_view tok) {
  std::int64_t v = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last)
    throw FormatError("kernel: not an integer: '" + std::string(tok) + "'");
  if (v > Kernel::kMaxMagnitude || v < -Kernel::kMaxMagnitude - 1)
    throw FormatError("kernel: coefficient out of 16-bit range: " + std::string(tok));
  return static_cast<std::int32_t>(v);
}

}  // namespace

Kernel parse_kernel(std::string_view text) {
  std::vector<std::vector<std::int32_t>> rows;
  bool have_anchor = false;
  int anchor_row = 0;
  int anchor_col = 0;
  bool first_line = true;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto tokens = split_ws(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (tokens.empty()) continue;
    if (tokens.front() == "anchor") {
      if (!first_line) throw FormatError("kernel: anchor header must be the first line");
      if (tokens.size() != 3) throw FormatError("kernel: anchor header needs R and C");
      anchor_row = parse_int(tokens[1]);
      anchor_col = parse_int(tokens[2]);
      have_anchor = true;
      first_line = false;
      continue;
    }
    first_line = false;
    std::vector<std::int32_t> row;
    row.reserve(tokens.size());
    for (auto t : tokens) row.push_back(parse_int(t));
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError("kernel: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("kernel: no coefficient rows");

  const int nrows = static_cast<int>(rows.size());
  const int ncols = static_cast<int>(rows.front().size());
  std::vector<std::int32_t> flat;
  flat.reserve(static_cast<std::size_t>(nrows) * ncols);
  for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());

  try {
    if (have_anchor) return Kernel(nrows, ncols, std::move(flat), anchor_row, anchor_col);
    return Kernel::centered(nrows, ncols, std::move(flat));
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
}

std::string format_kernel(const Kernel& k) {
  std::ostringstream out;
  if (!k.centered_anchor()) out << "anchor " << k.anchor_row() << ' ' << k.anchor_col() << '\n';
  for (int r = 0; r < k.rows(); ++r) {
    for (int c = 0; c < k.cols(); ++c) {
      if (c) out << ' ';
      out << k.at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace gstk
