#include "symcurve/diagram.hpp"

#include <algorithm>
#include <map>

namespace symcurve {

YoungDiagram YoungDiagram::from_columns(std::vector<int> cols) {
  if (cols.empty()) throw EmptyDiagram();
  for (size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] <= 0) throw BadFormat("column counts must be positive");
    if (i && cols[i] > cols[i - 1]) throw BadFormat("column counts must be non-increasing");
  }
  return YoungDiagram{std::move(cols)};
}

YoungDiagram YoungDiagram::from_rows(const std::vector<int>& row_lengths) {
  if (row_lengths.empty()) throw EmptyDiagram();
  std::vector<int> sorted = row_lengths;
  std::sort(sorted.rbegin(), sorted.rend());
  if (sorted.back() <= 0) throw BadFormat("row lengths must be positive");
  std::vector<int> cols(static_cast<size_t>(sorted[0]), 0);
  for (int len : sorted)
    for (int j = 0; j < len; ++j) cols[static_cast<size_t>(j)]++;
  return YoungDiagram{std::move(cols)};
}

std::vector<int> YoungDiagram::row_lengths() const {
  // Conjugate partition: row j has as many boxes as columns with count >= j.
  std::vector<int> rows;
  int height = column_counts.empty() ? 0 : column_counts[0];
  for (int j = 1; j <= height; ++j) {
    int len = 0;
    for (int c : column_counts)
      if (c >= j) ++len;
    rows.push_back(len);
  }
  return rows;
}

int YoungDiagram::total_boxes() const {
  int n = 0;
  for (int c : column_counts) n += c;
  return n;
}

int ReducedDiagram::half_dim() const {
  int m = 0;
  for (const auto& row : rows) m += row.length * row.multiplicity;
  return m;
}

std::string ReducedDiagram::str() const {
  std::string s;
  for (const auto& row : rows) {
    if (!s.empty()) s += ",";
    s += std::to_string(row.length) + "^" + std::to_string(row.multiplicity);
  }
  return "[" + s + "]";
}

bool ReducedDiagram::operator==(const ReducedDiagram& o) const {
  if (rows.size() != o.rows.size()) return false;
  for (size_t i = 0; i < rows.size(); ++i)
    if (rows[i].length != o.rows[i].length || rows[i].multiplicity != o.rows[i].multiplicity)
      return false;
  return true;
}

ReducedDiagram reduce_diagram(const YoungDiagram& D) {
  if (D.column_counts.empty()) throw EmptyDiagram();
  std::vector<int> rows = D.row_lengths();
  ReducedDiagram red;
  for (int len : rows) {
    if (!red.rows.empty() && red.rows.back().length == len)
      red.rows.back().multiplicity++;
    else
      red.rows.push_back(RowSpec{len, 1});
  }
  return red;
}

std::string Box::str() const {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

DoubleDiagram::DoubleDiagram(ReducedDiagram reduced) : reduced_(std::move(reduced)) {
  if (reduced_.rows.empty()) throw EmptyDiagram();
  for (size_t i = 1; i < reduced_.rows.size(); ++i)
    if (reduced_.rows[i].length >= reduced_.rows[i - 1].length)
      throw BadFormat("reduced diagram needs strictly decreasing row lengths");
  for (int i = 1; i <= reduced_.num_rows(); ++i) {
    int p = reduced_.p(i);
    for (int c = -p; c <= p; ++c) {
      if (c == 0) continue;
      boxes_.push_back(Box{i, c});
    }
  }
}

int DoubleDiagram::index_of(const Box& b) const {
  require(b);
  int idx = 0;
  for (int i = 1; i < b.row; ++i) idx += row_length(i);
  int p = reduced_.p(b.row);
  idx += b.col < 0 ? (b.col + p) : (b.col + p - 1);
  return idx;
}

bool DoubleDiagram::contains(const Box& b) const {
  if (b.row < 1 || b.row > reduced_.num_rows() || b.col == 0) return false;
  return std::abs(b.col) <= reduced_.p(b.row);
}

void DoubleDiagram::require(const Box& b) const {
  if (!contains(b)) throw BoxOutOfRange("no box " + b.str());
}

std::optional<Box> DoubleDiagram::right(const Box& b) const {
  require(b);
  int c = b.col == -1 ? 1 : b.col + 1;
  Box n{b.row, c};
  if (!contains(n)) return std::nullopt;
  return n;
}

std::optional<Box> DoubleDiagram::left(const Box& b) const {
  require(b);
  int c = b.col == 1 ? -1 : b.col - 1;
  Box n{b.row, c};
  if (!contains(n)) return std::nullopt;
  return n;
}

Box DoubleDiagram::mirror(const Box& b) const {
  require(b);
  return Box{b.row, -b.col};
}

int DoubleDiagram::eps(const Box& b) const {
  require(b);
  return b.col > 0 ? -1 : 1;
}

int DoubleDiagram::deg(const Box& b) const {
  require(b);
  return b.col < 0 ? -b.col - 1 : -b.col;
}

int DoubleDiagram::left_index(const Box& b) const {
  require(b);
  int p = reduced_.p(b.row);
  return b.col < 0 ? b.col + p + 1 : b.col + p;
}

Box DoubleDiagram::last_box(int row) const {
  Box b{row, reduced_.p(row)};
  require(b);
  return b;
}

Box DoubleDiagram::first_box(int row) const {
  Box b{row, -reduced_.p(row)};
  require(b);
  return b;
}

DoubleDiagram build_double_diagram(const ReducedDiagram& d) { return DoubleDiagram(d); }

std::vector<std::pair<Box, Box>> pair_chain(const DoubleDiagram& dd, const Box& b,
                                            const Box& rho) {
  dd.require(b);
  dd.require(rho);
  if (dd.right(rho)) throw NotLastBox("rho " + rho.str() + " is not the last box of its row");
  if (b.row < rho.row) throw RowOrderViolated("b " + b.str() + " lies higher than rho " + rho.str());
  if (b == rho) throw RowOrderViolated("b must differ from rho");
  std::vector<std::pair<Box, Box>> chain;
  Box x = b, y = rho;
  chain.emplace_back(x, y);
  while (true) {
    auto lx = dd.left(x);
    auto ly = dd.left(y);
    if (!lx || !ly) break;
    x = *lx;
    y = *ly;
    chain.emplace_back(x, y);
  }
  return chain;
}

namespace {

bool is_mirror_pair_shape(const DoubleDiagram& dd, const Box& x, const Box& y) {
  return dd.mirror(y) == x;  // (m(e), e)
}

bool is_mirror_right_shape(const DoubleDiagram& dd, const Box& x, const Box& y) {
  auto ry = dd.right(y);
  return ry && dd.mirror(*ry) == x;  // (m(r(e)), e)
}

}  // namespace

std::pair<Box, Box> phi0(const DoubleDiagram& dd, const Box& b, const Box& rho) {
  auto chain = pair_chain(dd, b, rho);
  std::vector<std::pair<Box, Box>> selected;
  if (b.row == rho.row) {
    int k = dd.left_index(b);
    for (const auto& pr : chain) {
      bool hit = (k % 2 == 1) ? is_mirror_pair_shape(dd, pr.first, pr.second)
                              : is_mirror_right_shape(dd, pr.first, pr.second);
      if (hit) selected.push_back(pr);
    }
  } else {
    // Cross-row rule: c = first box of b's row, d its chain partner.
    const auto& last = chain.back();
    Box c = dd.first_box(b.row);
    if (last.first != c)
      throw AssignmentAmbiguous("chain does not reach the first box of b's row");
    Box d = last.second;
    if (dd.mirror(c).col < d.col) {
      selected.push_back(last);
    } else {
      // The unique pair whose first component is m(b1) or m(r(b1)) with b1 in
      // the column of the second component.
      for (const auto& pr : chain) {
        Box mb = dd.mirror(pr.first);
        bool aligned = mb.col == pr.second.col;
        auto lm = dd.left(mb);
        bool aligned_shift = lm && lm->col == pr.second.col;
        if (aligned || aligned_shift) selected.push_back(pr);
      }
    }
  }
  if (selected.size() != 1)
    throw AssignmentAmbiguous("rule selected " + std::to_string(selected.size()) +
                              " chain pairs for b=" + b.str() + " rho=" + rho.str());
  return selected[0];
}

std::vector<std::pair<Box, Box>> admissible_chain_keys(const DoubleDiagram& dd) {
  std::vector<std::pair<Box, Box>> keys;
  for (int i = 1; i <= dd.reduced().num_rows(); ++i) {
    Box rho = dd.last_box(i);
    for (const Box& b : dd.boxes()) {
      if (b.row < i || b == rho) continue;
      keys.emplace_back(b, rho);
    }
  }
  return keys;
}

Assignment phi0_assignment(const DoubleDiagram& dd) {
  Assignment a;
  a.keys = admissible_chain_keys(dd);
  for (const auto& key : a.keys) {
    auto chain = pair_chain(dd, key.first, key.second);
    auto pick = phi0(dd, key.first, key.second);
    int j = -1;
    for (size_t i = 0; i < chain.size(); ++i)
      if (chain[i] == pick) j = static_cast<int>(i);
    a.choice.push_back(j);
  }
  return a;
}

Assignment random_assignment(const DoubleDiagram& dd, Rng& rng) {
  Assignment a;
  a.keys = admissible_chain_keys(dd);
  for (const auto& key : a.keys) {
    auto chain = pair_chain(dd, key.first, key.second);
    a.choice.push_back(static_cast<int>(rng.integer(0, static_cast<long>(chain.size()) - 1)));
  }
  return a;
}

namespace {
void partitions_rec(int n, int max_part, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(n - part, part, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<ReducedDiagram> all_reduced_diagrams(int max_boxes) {
  std::vector<ReducedDiagram> result;
  for (int n = 1; n <= max_boxes; ++n) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions_rec(n, n, cur, parts);
    for (const auto& rows : parts)
      result.push_back(reduce_diagram(YoungDiagram::from_rows(rows)));
  }
  return result;
}

}  // namespace symcurve
