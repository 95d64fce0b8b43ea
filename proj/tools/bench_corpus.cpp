#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "melorig/corpus.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using melorig::PitchClass;
using melorig::PitchClassSequence;

std::vector<PitchClassSequence> synth_corpus(std::size_t pieces, std::size_t notes) {
  std::vector<PitchClassSequence> seqs(pieces);
  for (std::size_t i = 0; i < pieces; ++i) {
    std::mt19937 rng(static_cast<std::uint32_t>(1000 + i));
    std::uniform_int_distribution<int> pc(0, 11);
    seqs[i].piece_id = "piece_" + std::to_string(i);
    seqs[i].notes.reserve(notes);
    for (std::size_t k = 0; k < notes; ++k)
      seqs[i].notes.push_back(PitchClass(pc(rng)));
  }
  return seqs;
}

template <typename F>
double time_ms(F&& f) {
  auto start = std::chrono::steady_clock::now();
  f();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-22s %10.1f ms %10.1f ms   x%5.2f   %s\n", kernel, serial_ms,
              parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              match ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel corpus kernel benchmark"};
  std::size_t pieces = 2000, notes = 2000;
  int order = 3;
  int threads = 0;
  app.add_option("--pieces", pieces, "synthetic piece count");
  app.add_option("--notes", notes, "notes per piece");
  app.add_option("--order", order, "n-gram order");
  app.add_option("--threads", threads, "thread count (0 = default)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
  std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("openmp not available, parallel kernels fall back to serial\n");
#endif

  auto seqs = synth_corpus(pieces, notes);
  std::printf("%zu pieces x %zu notes\n\n", pieces, notes);
  std::printf("%-22s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

  melorig::CountMatrix counts_s, counts_p;
  double t_s = time_ms([&] { counts_s = melorig::corpus_count_matrix_serial(seqs); });
  double t_p = time_ms([&] { counts_p = melorig::corpus_count_matrix(seqs); });
  report("count_matrix", t_s, t_p, counts_s == counts_p);

  melorig::NgramCounts ngrams_s(order), ngrams_p(order);
  t_s = time_ms([&] { ngrams_s = melorig::corpus_ngram_counts_serial(seqs, order); });
  t_p = time_ms([&] { ngrams_p = melorig::corpus_ngram_counts(seqs, order); });
  report("ngram_counts", t_s, t_p,
         ngrams_s.raw() == ngrams_p.raw() &&
             ngrams_s.total_windows() == ngrams_p.total_windows());

  auto probs = melorig::normalize(counts_s);
  melorig::ScoreReport scores_s, scores_p;
  t_s = time_ms([&] {
    scores_s = melorig::score_corpus_serial(seqs, probs, melorig::Method::AllNotes);
  });
  t_p = time_ms(
      [&] { scores_p = melorig::score_corpus(seqs, probs, melorig::Method::AllNotes); });
  bool match = scores_s.scores.size() == scores_p.scores.size();
  for (std::size_t i = 0; match && i < scores_s.scores.size(); ++i)
    match = scores_s.scores[i].piece_id == scores_p.scores[i].piece_id &&
            scores_s.scores[i].value == scores_p.scores[i].value;
  report("score_all_notes", t_s, t_p, match);

  return 0;
}
