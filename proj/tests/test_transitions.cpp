#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "melorig/csv.hpp"
#include "melorig/errors.hpp"
#include "melorig/transitions.hpp"
#include "support/gen.hpp"

using namespace melorig;

namespace {

PitchClassSequence seq_of(std::initializer_list<int> pcs) {
  PitchClassSequence s;
  s.piece_id = "seq";
  for (int pc : pcs) s.notes.emplace_back(pc);
  return s;
}

const char* data_dir() { return MELORIG_TEST_DATA_DIR; }

}  // namespace

TEST_CASE("count_transitions counts ordered pairs") {
  CountMatrix m = count_transitions(seq_of({0, 0}));
  CHECK(m.counts[0][0] == 1);
  CHECK(m.total_bigrams == 1);

  m = count_transitions(seq_of({0, 2, 0}));
  CHECK(m.counts[0][2] == 1);
  CHECK(m.counts[2][0] == 1);
  CHECK(m.total_bigrams == 2);
}

TEST_CASE("short sequences produce no bigrams") {
  CHECK(count_transitions(seq_of({})).total_bigrams == 0);
  CHECK(count_transitions(seq_of({5})).total_bigrams == 0);
}

TEST_CASE("total_bigrams equals the sum of all cells") {
  std::mt19937 rng(310);
  for (int trial = 0; trial < 50; ++trial) {
    auto seq = testsup::random_sequence(rng, 200);
    CountMatrix m = count_transitions(seq);
    std::uint64_t sum = 0;
    for (int r = 0; r < 12; ++r) sum += m.row_total(r);
    CHECK(sum == m.total_bigrams);
    CHECK(m.total_bigrams == seq.note_count() - 1);
  }
}

TEST_CASE("merge then subtract returns the original counts") {
  std::mt19937 rng(311);
  for (int trial = 0; trial < 30; ++trial) {
    CountMatrix a = testsup::random_count_matrix(rng);
    CountMatrix b = testsup::random_count_matrix(rng);
    CountMatrix merged = merge_counts(a, b);
    CHECK(merged.total_bigrams == a.total_bigrams + b.total_bigrams);
    CHECK(subtract_counts(merged, b) == a);
  }
}

TEST_CASE("subtracting more than present raises LengthMismatch") {
  CountMatrix a = count_transitions(seq_of({0, 1}));
  CountMatrix b = count_transitions(seq_of({0, 1, 0, 1}));
  CHECK(testsup::raises(Errc::LengthMismatch, [&] { subtract_counts(a, b); }));
}

TEST_CASE("normalize makes defined rows sum to one") {
  std::mt19937 rng(312);
  for (int trial = 0; trial < 50; ++trial) {
    StochasticMatrix m = normalize(testsup::random_count_matrix(rng));
    for (int r = 0; r < 12; ++r) {
      REQUIRE(m.row_defined[r]);
      double sum = 0.0;
      for (int c = 0; c < 12; ++c) {
        sum += m.probs[r][c];
        CHECK(m.probs[r][c] >= 0.0);
        CHECK(m.probs[r][c] <= 1.0);
      }
      CHECK(std::fabs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("rows with no observations are undefined and lookup refuses them") {
  CountMatrix m = count_transitions(seq_of({0, 2}));  // only C has outgoing data
  StochasticMatrix p = normalize(m);
  CHECK(p.row_defined[0]);
  CHECK_FALSE(p.row_defined[2]);
  CHECK_FALSE(p.all_rows_defined());
  CHECK(lookup(p, PitchClass(0), PitchClass(2)) == 1.0);
  CHECK(testsup::raises(Errc::UndefinedRow,
                        [&] { lookup(p, PitchClass(2), PitchClass(0)); }));
}

TEST_CASE("the bundled count fixture has the documented row totals") {
  CountMatrix m = read_count_matrix_csv(std::filesystem::path(data_dir()) /
                                        "reference_counts.csv");
  const std::uint64_t expected[12] = {211405, 160442, 219972, 179627, 190569, 203210,
                                      153489, 208151, 164351, 208909, 194394, 161882};
  for (int r = 0; r < 12; ++r) CHECK(m.row_total(r) == expected[r]);
  CHECK(m.total_bigrams == 2256401);
}

TEST_CASE("normalizing the count fixture reproduces the probability fixture") {
  auto dir = std::filesystem::path(data_dir());
  StochasticMatrix got = normalize(read_count_matrix_csv(dir / "reference_counts.csv"));
  StochasticMatrix want = read_stochastic_matrix_csv(dir / "reference_probs_4dp.csv");
  double max_dev = 0.0;
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c)
      max_dev = std::max(max_dev, std::fabs(got.probs[r][c] - want.probs[r][c]));
  CHECK(max_dev <= 5e-5);
  CHECK(got.probs[0][0] == doctest::Approx(0.23039190179986282).epsilon(1e-12));
  CHECK(std::fabs(got.probs[10][10] - 0.251078) <= 5e-6);
}

TEST_CASE("in the fixture matrix every row peaks on its diagonal") {
  StochasticMatrix m = normalize(read_count_matrix_csv(
      std::filesystem::path(data_dir()) / "reference_counts.csv"));
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c)
      if (c != r) CHECK(m.probs[r][r] > m.probs[r][c]);
}

TEST_CASE("count matrices round trip through CSV") {
  testsup::TempDir dir;
  std::mt19937 rng(313);
  CountMatrix m = testsup::random_count_matrix(rng);
  write_count_matrix_csv(m, dir.file("m.csv"));
  CHECK(read_count_matrix_csv(dir.file("m.csv")) == m);
}

TEST_CASE("stochastic matrices round trip through CSV including undefined rows") {
  testsup::TempDir dir;
  CountMatrix counts = count_transitions(seq_of({0, 2, 0, 4}));
  StochasticMatrix m = normalize(counts);
  write_stochastic_matrix_csv(m, dir.file("p.csv"));
  StochasticMatrix back = read_stochastic_matrix_csv(dir.file("p.csv"));
  for (int r = 0; r < 12; ++r) {
    CHECK(back.row_defined[r] == m.row_defined[r]);
    for (int c = 0; c < 12; ++c) CHECK(back.probs[r][c] == m.probs[r][c]);
  }
}

TEST_CASE("matrix CSVs with bad labels raise BadHeader") {
  testsup::TempDir dir;
  std::mt19937 rng(314);
  write_count_matrix_csv(testsup::random_count_matrix(rng), dir.file("m.csv"));
  std::string text = csv::read_text_file(dir.file("m.csv"));
  text[1] = 'Q';  // first column label
  csv::write_text_file(dir.file("bad.csv"), text);
  CHECK(testsup::raises(Errc::BadHeader,
                        [&] { read_count_matrix_csv(dir.file("bad.csv")); }));
}

TEST_CASE("a partially empty stochastic row raises IoError") {
  testsup::TempDir dir;
  std::mt19937 rng(315);
  write_stochastic_matrix_csv(testsup::random_stochastic(rng), dir.file("p.csv"));
  auto rows = csv::parse(csv::read_text_file(dir.file("p.csv")));
  rows[3][5] = "";  // poke one hole in an otherwise defined row
  std::string text;
  for (const auto& row : rows) text += csv::join(row);
  csv::write_text_file(dir.file("bad.csv"), text);
  CHECK(testsup::raises(Errc::IoError,
                        [&] { read_stochastic_matrix_csv(dir.file("bad.csv")); }));
}

TEST_CASE("n-gram order limits are enforced") {
  CHECK(testsup::raises(Errc::BadOrder, [] { NgramCounts n(1); }));
  CHECK(testsup::raises(Errc::BadOrder, [] { NgramCounts n(9); }));
  CHECK(NgramCounts(2).order() == 2);
  CHECK(NgramCounts(8).order() == 8);
}

TEST_CASE("n-gram keys pack and unpack losslessly") {
  std::mt19937 rng(316);
  for (int order = 2; order <= 8; ++order) {
    NgramCounts table(order);
    for (int trial = 0; trial < 100; ++trial) {
      auto key = testsup::random_pcs(rng, static_cast<std::size_t>(order));
      table.add(key);
      CHECK(table.unpack(table.pack(key)) == key);
      CHECK(table.count(key) >= 1);
    }
  }
}

TEST_CASE("count_ngrams slides one window at a time") {
  NgramCounts n = count_ngrams(seq_of({0, 2, 0, 2}), 2);
  std::vector<PitchClass> cd{PitchClass(0), PitchClass(2)};
  std::vector<PitchClass> dc{PitchClass(2), PitchClass(0)};
  CHECK(n.count(cd) == 2);
  CHECK(n.count(dc) == 1);
  CHECK(n.total_windows() == 3);
  CHECK(n.distinct() == 2);
}

TEST_CASE("order-2 n-grams agree with the transition counts") {
  std::mt19937 rng(317);
  for (int trial = 0; trial < 30; ++trial) {
    auto seq = testsup::random_sequence(rng, 150);
    CountMatrix m = count_transitions(seq);
    NgramCounts n = count_ngrams(seq, 2);
    CHECK(n.total_windows() == m.total_bigrams);
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        std::vector<PitchClass> key{PitchClass(a), PitchClass(b)};
        CHECK(n.count(key) == m.counts[a][b]);
      }
  }
}

TEST_CASE("merging n-gram tables equals counting the union") {
  std::mt19937 rng(318);
  auto s1 = testsup::random_sequence(rng, 80, "a");
  auto s2 = testsup::random_sequence(rng, 90, "b");
  NgramCounts merged = count_ngrams(s1, 3);
  merge_ngrams(merged, count_ngrams(s2, 3));

  std::map<std::uint32_t, std::uint64_t> expect;
  for (const auto& s : {s1, s2}) {
    NgramCounts one = count_ngrams(s, 3);
    for (const auto& [k, v] : one.raw()) expect[k] += v;
  }
  CHECK(merged.raw().size() == expect.size());
  for (const auto& [k, v] : merged.raw()) CHECK(expect[k] == v);
}

TEST_CASE("merging different orders raises BadOrder") {
  NgramCounts a(3), b(4);
  CHECK(testsup::raises(Errc::BadOrder, [&] { merge_ngrams(a, b); }));
}

TEST_CASE("sequences shorter than the order produce no windows") {
  CHECK(count_ngrams(seq_of({0, 1}), 3).total_windows() == 0);
}
