#include "melorig/transitions.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "melorig/csv.hpp"
#include "melorig/errors.hpp"

namespace melorig {

CountMatrix count_transitions(const PitchClassSequence& seq) {
  CountMatrix m;
  accumulate_transitions(m, seq);
  return m;
}

void accumulate_transitions(CountMatrix& into, const PitchClassSequence& seq) {
  const auto& notes = seq.notes;
  for (std::size_t i = 0; i + 1 < notes.size(); ++i) {
    ++into.counts[notes[i].value()][notes[i + 1].value()];
    ++into.total_bigrams;
  }
}

CountMatrix merge_counts(const CountMatrix& a, const CountMatrix& b) {
  CountMatrix out = a;
  for (std::size_t r = 0; r < PitchClass::kCount; ++r)
    for (std::size_t c = 0; c < PitchClass::kCount; ++c) out.counts[r][c] += b.counts[r][c];
  out.total_bigrams += b.total_bigrams;
  return out;
}

CountMatrix subtract_counts(const CountMatrix& a, const CountMatrix& b) {
  CountMatrix out = a;
  for (std::size_t r = 0; r < PitchClass::kCount; ++r)
    for (std::size_t c = 0; c < PitchClass::kCount; ++c) {
      if (b.counts[r][c] > out.counts[r][c])
        raise(Errc::LengthMismatch, "subtract_counts: subtrahend exceeds count at (" +
                                        std::to_string(r) + "," + std::to_string(c) + ")");
      out.counts[r][c] -= b.counts[r][c];
    }
  if (b.total_bigrams > out.total_bigrams)
    raise(Errc::LengthMismatch, "subtract_counts: subtrahend total exceeds count total");
  out.total_bigrams -= b.total_bigrams;
  return out;
}

StochasticMatrix normalize(const CountMatrix& counts) {
  StochasticMatrix out;
  for (std::size_t r = 0; r < PitchClass::kCount; ++r) {
    std::uint64_t total = counts.row_total(static_cast<int>(r));
    out.row_defined[r] = total > 0;
    if (total == 0) continue;
    for (std::size_t c = 0; c < PitchClass::kCount; ++c)
      out.probs[r][c] =
          static_cast<double>(counts.counts[r][c]) / static_cast<double>(total);
  }
  return out;
}

double lookup(const StochasticMatrix& m, PitchClass from, PitchClass to) {
  if (!m.row_defined[from.value()])
    raise(Errc::UndefinedRow,
          std::string("no observed transitions from pitch class ") + from.name());
  return m.probs[from.value()][to.value()];
}

NgramCounts::NgramCounts(int order) : order_(order) {
  if (order < kMinOrder || order > kMaxOrder)
    raise(Errc::BadOrder, "n-gram order must be in [2,8], got " + std::to_string(order));
}

std::uint32_t NgramCounts::pack(std::span<const PitchClass> key) const {
  if (static_cast<int>(key.size()) != order_)
    raise(Errc::LengthMismatch, "n-gram key length " + std::to_string(key.size()) +
                                    " does not match order " + std::to_string(order_));
  std::uint32_t packed = 0;
  for (PitchClass pc : key) packed = (packed << 4) | pc.value();
  return packed;
}

std::vector<PitchClass> NgramCounts::unpack(std::uint32_t packed) const {
  std::vector<PitchClass> key(static_cast<std::size_t>(order_), PitchClass(0));
  for (int i = order_ - 1; i >= 0; --i) {
    key[static_cast<std::size_t>(i)] = PitchClass(static_cast<int>(packed & 0xFu));
    packed >>= 4;
  }
  return key;
}

void NgramCounts::add(std::span<const PitchClass> key, std::uint64_t n) {
  counts_[pack(key)] += n;
  total_ += n;
}

std::uint64_t NgramCounts::count(std::span<const PitchClass> key) const {
  auto it = counts_.find(pack(key));
  return it == counts_.end() ? 0 : it->second;
}

NgramCounts count_ngrams(const PitchClassSequence& seq, int order) {
  NgramCounts out(order);
  const auto& notes = seq.notes;
  std::size_t len = static_cast<std::size_t>(order);
  if (notes.size() >= len)
    for (std::size_t i = 0; i + len <= notes.size(); ++i)
      out.add(std::span<const PitchClass>(notes.data() + i, len));
  return out;
}

void merge_ngrams(NgramCounts& into, const NgramCounts& more) {
  if (into.order() != more.order())
    raise(Errc::BadOrder, "cannot merge n-gram counts of different orders");
  for (const auto& [key, n] : more.raw()) {
    auto pcs = more.unpack(key);
    into.add(pcs, n);
  }
}

namespace {

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

csv::Row header_row() {
  csv::Row row;
  row.emplace_back("");
  for (const char* name : kPitchClassNames) row.emplace_back(name);
  return row;
}

void check_labels(const std::vector<csv::Row>& rows, const std::filesystem::path& path) {
  if (rows.size() != PitchClass::kCount + 1)
    raise(Errc::BadHeader, path.string() + ": expected 13 rows, got " +
                               std::to_string(rows.size()));
  const csv::Row& head = rows[0];
  if (head.size() != PitchClass::kCount + 1)
    raise(Errc::BadHeader, path.string() + ": expected 13 header columns");
  for (std::size_t c = 0; c < PitchClass::kCount; ++c)
    if (head[c + 1] != kPitchClassNames[c])
      raise(Errc::BadHeader, path.string() + ": bad column label " + head[c + 1]);
  for (std::size_t r = 0; r < PitchClass::kCount; ++r) {
    if (rows[r + 1].size() != PitchClass::kCount + 1)
      raise(Errc::BadHeader, path.string() + ": short row " + std::to_string(r + 1));
    if (rows[r + 1][0] != kPitchClassNames[r])
      raise(Errc::BadHeader, path.string() + ": bad row label " + rows[r + 1][0]);
  }
}

}  // namespace

void write_count_matrix_csv(const CountMatrix& m, const std::filesystem::path& path) {
  std::string text = csv::join(header_row());
  for (std::size_t r = 0; r < PitchClass::kCount; ++r) {
    csv::Row row;
    row.emplace_back(kPitchClassNames[r]);
    for (std::size_t c = 0; c < PitchClass::kCount; ++c)
      row.emplace_back(std::to_string(m.counts[r][c]));
    text += csv::join(row);
  }
  csv::write_text_file(path, text);
}

CountMatrix read_count_matrix_csv(const std::filesystem::path& path) {
  auto rows = csv::parse(csv::read_text_file(path));
  check_labels(rows, path);
  CountMatrix m;
  for (std::size_t r = 0; r < PitchClass::kCount; ++r)
    for (std::size_t c = 0; c < PitchClass::kCount; ++c) {
      const std::string& cell = rows[r + 1][c + 1];
      char* end = nullptr;
      std::uint64_t v = std::strtoull(cell.c_str(), &end, 10);
      if (cell.empty() || end != cell.c_str() + cell.size())
        raise(Errc::IoError, path.string() + ": bad count cell '" + cell + "'");
      m.counts[r][c] = v;
      m.total_bigrams += v;
    }
  return m;
}

void write_stochastic_matrix_csv(const StochasticMatrix& m,
                                 const std::filesystem::path& path) {
  std::string text = csv::join(header_row());
  for (std::size_t r = 0; r < PitchClass::kCount; ++r) {
    csv::Row row;
    row.emplace_back(kPitchClassNames[r]);
    for (std::size_t c = 0; c < PitchClass::kCount; ++c)
      row.emplace_back(m.row_defined[r] ? full_precision(m.probs[r][c]) : std::string());
    text += csv::join(row);
  }
  csv::write_text_file(path, text);
}

StochasticMatrix read_stochastic_matrix_csv(const std::filesystem::path& path) {
  auto rows = csv::parse(csv::read_text_file(path));
  check_labels(rows, path);
  StochasticMatrix m;
  for (std::size_t r = 0; r < PitchClass::kCount; ++r) {
    std::size_t empties = 0;
    for (std::size_t c = 0; c < PitchClass::kCount; ++c) {
      const std::string& cell = rows[r + 1][c + 1];
      if (cell.empty()) {
        ++empties;
        continue;
      }
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size())
        raise(Errc::IoError, path.string() + ": bad probability cell '" + cell + "'");
      m.probs[r][c] = v;
    }
    if (empties != 0 && empties != PitchClass::kCount)
      raise(Errc::IoError,
            path.string() + ": partially empty row " + std::to_string(r + 1));
    m.row_defined[r] = empties == 0;
  }
  return m;
}

}  // namespace melorig
