#include "sltlrm/grid.hpp"

#include <deque>
#include <fstream>
#include <sstream>

namespace sltlrm {

GridMap load_map(const std::string& text) {
  GridMap m;
  std::vector<std::string> grid_rows;
  std::istringstream in(text);
  std::string line;
  bool in_grid = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!in_grid) {
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq != std::string::npos && eq == 1) {
        char glyph = line[0];
        std::string prop = line.substr(2);
        if (prop.empty()) throw MapError("empty proposition in legend line: " + line);
        m.legend[glyph] = prop;
        continue;
      }
      in_grid = true;
    }
    if (line.empty()) continue;
    grid_rows.push_back(line);
  }
  if (grid_rows.empty()) throw MapError("map has no grid");
  m.height = static_cast<int>(grid_rows.size());
  m.width = static_cast<int>(grid_rows[0].size());
  for (int y = 0; y < m.height; ++y) {
    if (static_cast<int>(grid_rows[y].size()) != m.width)
      throw MapError("ragged grid: row " + std::to_string(y) + " has width " +
                     std::to_string(grid_rows[y].size()) + ", expected " +
                     std::to_string(m.width));
    for (int x = 0; x < m.width; ++x) {
      char g = grid_rows[y][x];
      Cell c{x, y};
      if (g == '#') {
        m.walls.insert(c);
      } else if (g == '.') {
        // empty
      } else if (g == 'S') {
        m.starts.push_back(c);
      } else if (auto it = m.legend.find(g); it != m.legend.end()) {
        m.marks[c] = it->second;
      } else {
        throw MapError("unknown glyph '" + std::string(1, g) + "' at " + std::to_string(x) +
                       "," + std::to_string(y));
      }
    }
  }
  if (m.starts.empty()) throw MapError("map has no start cell (S)");

  // every marked cell must be reachable from every start
  for (Cell s0 : m.starts) {
    std::set<Cell> seen{s0};
    std::deque<Cell> queue{s0};
    while (!queue.empty()) {
      Cell c = queue.front();
      queue.pop_front();
      for (Action a : {Action::up, Action::down, Action::left, Action::right}) {
        Cell n = step(m, c, a);
        if (seen.insert(n).second) queue.push_back(n);
      }
    }
    for (const auto& [cell, p] : m.marks)
      if (!seen.count(cell))
        throw MapError("marked cell " + p + " at " + std::to_string(cell.x) + "," +
                       std::to_string(cell.y) + " unreachable from start");
  }
  return m;
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MapError("cannot open map file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

Cell step(const GridMap& map, Cell s, Action a) {
  Cell t = s;
  switch (a) {
    case Action::up: t.y -= 1; break;
    case Action::down: t.y += 1; break;
    case Action::left: t.x -= 1; break;
    case Action::right: t.x += 1; break;
  }
  if (!map.in_bounds(t) || map.is_wall(t)) return s;
  return t;
}

Label label(const GridMap& map, Cell s) {
  auto it = map.marks.find(s);
  if (it == map.marks.end()) return Label{};
  return Label{it->second};
}

Alphabet alphabet(const GridMap& map) {
  std::set<std::string> props;
  for (const auto& [cell, p] : map.marks) props.insert(p);
  return Alphabet::singletons({props.begin(), props.end()});
}

LabeledGridEnv::LabeledGridEnv(GridMap map)
    : map_(std::move(map)), alphabet_(alphabet(map_)) {
  int n = n_states();
  step_.assign(n * kNumActions, 0);
  label_idx_.assign(n, alphabet_.index_of(Label{}));
  for (int y = 0; y < map_.height; ++y) {
    for (int x = 0; x < map_.width; ++x) {
      Cell c{x, y};
      int s = cell_index(c);
      for (int a = 0; a < kNumActions; ++a)
        step_[s * kNumActions + a] = cell_index(step(map_, c, static_cast<Action>(a)));
      label_idx_[s] = alphabet_.index_of(label(map_, c));
      if (!map_.is_wall(c)) free_states_.push_back(s);
    }
  }
}

}  // namespace sltlrm
