#include "rdm/instance.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rdm/error.hpp"

namespace rdm {

namespace fs = std::filesystem;

const char* to_string(Semantics s) { return s == Semantics::set ? "set" : "bag"; }

Semantics parse_semantics(std::string_view text) {
  if (text == "set") return Semantics::set;
  if (text == "bag") return Semantics::bag;
  throw Error(ErrorCode::invalid_argument, "unknown semantics '" + std::string(text) + "'");
}

TupleId parse_tuple_id(std::string_view text) {
  auto colon = text.rfind(':');
  auto bad = [&] {
    return Error(ErrorCode::unknown_tuple,
                 "malformed tuple id '" + std::string(text) + "' (expected Relation:row)");
  };
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) throw bad();
  std::size_t row = 0;
  auto digits = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), row);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || row == 0) throw bad();
  return {std::string(text.substr(0, colon)), row};
}

void Instance::add_relation(const std::string& name, std::size_t arity) {
  auto [it, fresh] = arity_.emplace(name, arity);
  if (!fresh && it->second != arity) {
    throw Error(ErrorCode::data, "relation " + name + " declared with arity " +
                                     std::to_string(arity) + " but has arity " +
                                     std::to_string(it->second));
  }
  relations_[name];
}

TupleId Instance::add_tuple(const std::string& relation, std::vector<std::string> values,
                            std::int64_t multiplicity) {
  auto it = relations_.find(relation);
  std::size_t row = (it == relations_.end() || it->second.empty()) ? 1 : it->second.back().id.row + 1;
  return add_tuple_at(relation, row, std::move(values), multiplicity);
}

TupleId Instance::add_tuple_at(const std::string& relation, std::size_t row,
                               std::vector<std::string> values, std::int64_t multiplicity) {
  if (!has_relation(relation)) add_relation(relation, values.size());
  if (values.size() != arity_.at(relation)) {
    throw Error(ErrorCode::data, "arity mismatch in relation " + relation);
  }
  if (multiplicity < 1) throw Error(ErrorCode::data, "multiplicity must be positive");
  if (semantics_ == Semantics::set && multiplicity != 1) {
    throw Error(ErrorCode::data, "set semantics requires multiplicity 1");
  }
  auto& rel = relations_[relation];
  if (row == 0 || (!rel.empty() && rel.back().id.row >= row)) {
    throw Error(ErrorCode::data, "row indices of " + relation + " must increase");
  }
  TupleId id{relation, row};
  rel.push_back({id, std::move(values), multiplicity});
  return id;
}

const Instance::Relation& Instance::relation(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw Error(ErrorCode::data, "missing relation " + name);
  return it->second;
}

const TupleRef* Instance::find(const TupleId& id) const {
  auto it = relations_.find(id.relation);
  if (it == relations_.end()) return nullptr;
  // Rows are stored in increasing order.
  auto pos = std::lower_bound(it->second.begin(), it->second.end(), id.row,
                              [](const TupleRef& t, std::size_t row) { return t.id.row < row; });
  if (pos == it->second.end() || pos->id.row != id.row) return nullptr;
  return &*pos;
}

const TupleRef& Instance::at(const TupleId& id) const {
  if (const TupleRef* t = find(id)) return *t;
  throw Error(ErrorCode::unknown_tuple, "unknown tuple " + id.str());
}

std::size_t Instance::tuple_count() const {
  std::size_t n = 0;
  for (const auto& [_, rel] : relations_) n += rel.size();
  return n;
}

bool operator==(const Instance& a, const Instance& b) {
  if (a.semantics_ != b.semantics_ || a.arity_ != b.arity_) return false;
  if (a.relations_.size() != b.relations_.size()) return false;
  for (const auto& [name, rel] : a.relations_) {
    const auto& other = b.relations_.at(name);
    if (rel.size() != other.size()) return false;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      if (rel[i].id != other[i].id || rel[i].values != other[i].values ||
          rel[i].multiplicity != other[i].multiplicity) {
        return false;
      }
    }
  }
  return true;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  if (line.empty()) out.emplace_back();
  return out;
}

void read_relation(Instance& inst, const std::string& name, std::size_t arity,
                   const fs::path& file, std::vector<std::string>* warnings) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::data, "missing relation file " + file.string());
  auto where = [&](std::size_t line) { return file.filename().string() + ":" + std::to_string(line); };

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::data, where(1) + ": missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  bool has_mult = !header.empty() && header.back() == "_mult";
  std::size_t columns = header.size() - (has_mult ? 1 : 0);
  if (columns != arity) {
    throw Error(ErrorCode::data, where(1) + ": relation " + name + " has " +
                                     std::to_string(columns) + " columns, query expects " +
                                     std::to_string(arity));
  }

  inst.add_relation(name, arity);
  std::map<std::vector<std::string>, std::size_t> seen;  // values -> index in relation
  std::vector<std::pair<std::vector<std::string>, std::int64_t>> rows;
  std::vector<std::size_t> row_numbers;
  std::size_t lineno = 1;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::data, where(lineno) + ": expected " + std::to_string(header.size()) +
                                       " fields, found " + std::to_string(cells.size()));
    }
    std::int64_t mult = 1;
    if (has_mult) {
      const std::string& m = cells.back();
      auto [ptr, ec] = std::from_chars(m.data(), m.data() + m.size(), mult);
      if (ec != std::errc() || ptr != m.data() + m.size()) {
        throw Error(ErrorCode::data, where(lineno) + ": malformed multiplicity '" + m + "'");
      }
      if (mult < 1) {
        throw Error(ErrorCode::data, where(lineno) + ": non-positive multiplicity " + m);
      }
      cells.pop_back();
      if (inst.semantics() == Semantics::set) mult = 1;
    }
    if (auto it = seen.find(cells); it != seen.end()) {
      if (warnings) {
        warnings->push_back(where(lineno) + ": duplicate row merged into " + name + ":" +
                            std::to_string(row_numbers[it->second]));
      }
      if (inst.semantics() == Semantics::bag) rows[it->second].second += mult;
      continue;
    }
    seen.emplace(cells, rows.size());
    rows.emplace_back(std::move(cells), mult);
    row_numbers.push_back(row);
  }

  // Row indices follow the file's data rows, so merged duplicates leave gaps.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    inst.add_tuple_at(name, row_numbers[i], std::move(rows[i].first), rows[i].second);
  }
}

}  // namespace

Instance load_instance(const Query& q, const std::string& directory, Semantics semantics,
                       std::vector<std::string>* warnings) {
  if (!fs::is_directory(directory)) {
    throw Error(ErrorCode::data, "data directory " + directory + " does not exist");
  }
  Instance inst(semantics);
  for (const auto& name : q.relations()) {
    read_relation(inst, name, q.arity_of(name), fs::path(directory) / (name + ".csv"), warnings);
  }
  return inst;
}

std::string relation_to_csv(const Instance& inst, const std::string& relation) {
  std::ostringstream out;
  std::size_t arity = inst.arity(relation);
  for (std::size_t i = 1; i <= arity; ++i) out << (i > 1 ? "," : "") << 'c' << i;
  if (inst.semantics() == Semantics::bag) out << ",_mult";
  out << '\n';
  for (const auto& t : inst.relation(relation)) {
    for (std::size_t i = 0; i < t.values.size(); ++i) out << (i ? "," : "") << t.values[i];
    if (inst.semantics() == Semantics::bag) out << ',' << t.multiplicity;
    out << '\n';
  }
  return out.str();
}

void save_instance(const Instance& inst, const std::string& directory) {
  fs::create_directories(directory);
  for (const auto& [name, _] : inst.relations()) {
    std::ofstream out(fs::path(directory) / (name + ".csv"), std::ios::binary);
    if (!out) throw Error(ErrorCode::data, "cannot write " + name + ".csv in " + directory);
    out << relation_to_csv(inst, name);
  }
}

Instance random_instance(const Query& q, int tuples_per_relation, int domain_size,
                         std::uint64_t seed, Semantics semantics) {
  if (tuples_per_relation < 0 || domain_size < 1) {
    throw Error(ErrorCode::invalid_argument, "random_instance: bad sizes");
  }
  std::mt19937_64 rng(seed);
  // Modulo reduction keeps the stream identical across standard libraries.
  auto draw = [&](std::uint64_t n) { return rng() % n; };
  Instance inst(semantics);
  for (const auto& name : q.relations()) {
    std::size_t arity = q.arity_of(name);
    inst.add_relation(name, arity);
    std::set<std::vector<std::string>> seen;
    for (int i = 0; i < tuples_per_relation; ++i) {
      std::vector<std::string> values(arity);
      for (auto& v : values) v = "c" + std::to_string(1 + draw(static_cast<std::uint64_t>(domain_size)));
      std::int64_t mult = semantics == Semantics::bag ? static_cast<std::int64_t>(1 + draw(3)) : 1;
      if (seen.insert(values).second) inst.add_tuple(name, std::move(values), mult);
    }
  }
  return inst;
}

Instance delete_tuples(const Instance& inst, const std::set<TupleId>& ids) {
  for (const auto& id : ids) inst.at(id);
  Instance out(inst.semantics());
  for (const auto& [name, rel] : inst.relations()) {
    out.add_relation(name, inst.arity(name));
    for (const auto& t : rel) {
      if (!ids.count(t.id)) out.add_tuple_at(name, t.id.row, t.values, t.multiplicity);
    }
  }
  return out;
}

}  // namespace rdm
