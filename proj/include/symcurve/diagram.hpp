#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symcurve/scalar.hpp"

namespace symcurve {

/// Young diagram stored as boxes-per-column, column 1 leftmost, non-increasing.
struct YoungDiagram {
  std::vector<int> column_counts;

  static YoungDiagram from_columns(std::vector<int> cols);
  /// Builds the diagram from row lengths (the conjugate description).
  static YoungDiagram from_rows(const std::vector<int>& row_lengths);
  std::vector<int> row_lengths() const;
  int total_boxes() const;
};

struct RowSpec {
  int length;        // p_i
  int multiplicity;  // r_i
};

/// Rows of the diagram grouped by equal length: p_1 > p_2 > ... > p_s.
struct ReducedDiagram {
  std::vector<RowSpec> rows;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int p(int i) const { return rows[static_cast<size_t>(i) - 1].length; }        // 1-based
  int r(int i) const { return rows[static_cast<size_t>(i) - 1].multiplicity; }  // 1-based
  int p1() const { return rows.front().length; }
  /// m = sum r_i p_i, half the dimension of the modeled symplectic space.
  int half_dim() const;
  std::string str() const;
  bool operator==(const ReducedDiagram& o) const;
};

ReducedDiagram reduce_diagram(const YoungDiagram& D);

/// Box of the mirrored double diagram: 1-based row, signed column in
/// {-p_i..-1} u {1..p_i}. Negative columns form the mirror side.
struct Box {
  int row = 0;
  int col = 0;
  bool operator==(const Box& o) const { return row == o.row && col == o.col; }
  bool operator!=(const Box& o) const { return !(*this == o); }
  bool operator<(const Box& o) const {
    return row != o.row ? row < o.row : col < o.col;
  }
  std::string str() const;
};

/// The double diagram with box maps r, l, m, sign eps and degree tables.
/// Conventions: eps = -1 on the original side (col > 0), +1 on the mirror;
/// deg = |col| - 1 on the mirror side and -col on the original side, so the
/// degree drops by one per right shift and mirror-paired degrees sum to -1.
class DoubleDiagram {
 public:
  explicit DoubleDiagram(ReducedDiagram reduced);

  const ReducedDiagram& reduced() const { return reduced_; }
  /// Boxes in row-major order, mirror side first within each row.
  const std::vector<Box>& boxes() const { return boxes_; }
  int num_boxes() const { return static_cast<int>(boxes_.size()); }
  int index_of(const Box& b) const;
  bool contains(const Box& b) const;
  void require(const Box& b) const;

  std::optional<Box> right(const Box& b) const;
  std::optional<Box> left(const Box& b) const;
  Box mirror(const Box& b) const;
  int eps(const Box& b) const;
  int deg(const Box& b) const;
  int block_size(const Box& b) const { return reduced_.r(b.row); }
  /// 1-based position of the box in its row, counted from the left.
  int left_index(const Box& b) const;
  /// Last (rightmost) box of row i.
  Box last_box(int row) const;
  Box first_box(int row) const;
  int row_length(int row) const { return 2 * reduced_.p(row); }
  int p1() const { return reduced_.p1(); }
  int half_dim() const { return reduced_.half_dim(); }

 private:
  ReducedDiagram reduced_;
  std::vector<Box> boxes_;
};

DoubleDiagram build_double_diagram(const ReducedDiagram& d);

/// Maximal chain {(b, rho), (l b, l rho), ...} of simultaneous left shifts.
std::vector<std::pair<Box, Box>> pair_chain(const DoubleDiagram& dd, const Box& b,
                                            const Box& rho);

/// The classical assignment: selects one pair per chain following the
/// published normalization (same-row parity rule; cross-row alignment rule,
/// reading the duplicated odd case of the source as the even case).
std::pair<Box, Box> phi0(const DoubleDiagram& dd, const Box& b, const Box& rho);

/// All admissible chain keys (rho = last box of its row, b != rho not higher).
std::vector<std::pair<Box, Box>> admissible_chain_keys(const DoubleDiagram& dd);

/// One selected chain index per admissible key; index j means chain[j].
struct Assignment {
  std::vector<std::pair<Box, Box>> keys;
  std::vector<int> choice;
};

Assignment phi0_assignment(const DoubleDiagram& dd);
Assignment random_assignment(const DoubleDiagram& dd, Rng& rng);

/// All reduced diagrams whose underlying Young diagram has <= max_boxes boxes
/// (integer partitions by row lengths), in deterministic order.
std::vector<ReducedDiagram> all_reduced_diagrams(int max_boxes);

}  // namespace symcurve
