#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sltlrm/label.hpp"

namespace sltlrm {

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

enum class Action : int { up = 0, down = 1, left = 2, right = 3 };
inline constexpr int kNumActions = 4;

// A deterministic labeled grid world parsed from an ASCII map file:
// header lines "glyph=prop", then the grid ('#' wall, '.' empty,
// 'S' start, legend glyphs mark cells). Immutable after load.
struct GridMap {
  int width = 0;
  int height = 0;
  std::set<Cell> walls;
  std::map<char, std::string> legend;
  std::map<Cell, std::string> marks;
  std::vector<Cell> starts;

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  bool is_wall(Cell c) const { return walls.count(c) != 0; }
};

class MapError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Parses and validates: rectangular grid, at least one start, every
// marked cell reachable from every start (BFS).
GridMap load_map(const std::string& text);
GridMap load_map_file(const std::string& path);

// One step of the dynamics; moves into walls or out of bounds stay put.
Cell step(const GridMap& map, Cell s, Action a);

// Singleton label at marked cells, empty elsewhere.
Label label(const GridMap& map, Cell s);

// {} plus one singleton per marked proposition.
Alphabet alphabet(const GridMap& map);

// Flat-indexed wrapper precomputing the label index of every cell for a
// fixed alphabet; this is the learning hot path.
class LabeledGridEnv {
public:
  explicit LabeledGridEnv(GridMap map);

  const GridMap& map() const { return map_; }
  const Alphabet& env_alphabet() const { return alphabet_; }

  int n_states() const { return map_.width * map_.height; }
  int cell_index(Cell c) const { return c.y * map_.width + c.x; }
  Cell cell_of(int idx) const { return {idx % map_.width, idx / map_.width}; }

  int start_index() const { return cell_index(map_.starts.front()); }
  int step_index(int s, Action a) const { return step_[s * kNumActions + static_cast<int>(a)]; }
  int label_index(int s) const { return label_idx_[s]; }

  // All non-wall cells, row-major.
  const std::vector<int>& free_states() const { return free_states_; }

private:
  GridMap map_;
  Alphabet alphabet_;
  std::vector<int> step_;
  std::vector<int> label_idx_;
  std::vector<int> free_states_;
};

}  // namespace sltlrm
