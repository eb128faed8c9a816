#include "qext/measures.hpp"

#include <charconv>

namespace qext {

PureMeasure make_e_k(int k) {
  if (k < 1) throw ArgumentError("e_k: k must be >= 1");
  MeasureFlags flags;
  flags.concave_f = true;
  // Tail sums are linear on nonincreasing vectors, hence convex there.
  flags.convex_on_spectra = true;
  flags.vanishes_on_product = k > 1;
  return PureMeasure("e_k:" + std::to_string(k), [k](const RVectord& v) { return spectral::e_k(v, k); }, flags);
}

PureMeasure find_measure(const std::string& id) {
  if (id == "entropy") {
    MeasureFlags f;
    f.concave_f = true;
    f.subadditive = true;
    return PureMeasure(id, [](const RVectord& v) { return spectral::entropy(v); }, f);
  }
  if (id == "concurrence") {
    MeasureFlags f;
    f.concave_f = true;
    return PureMeasure(id, [](const RVectord& v) { return spectral::concurrence(v); }, f);
  }
  if (id == "geometric") {
    MeasureFlags f;
    f.concave_f = true;
    f.convex_on_spectra = true;  // 1 − λ_max is linear on nonincreasing vectors
    return PureMeasure(id, [](const RVectord& v) { return spectral::geometric(v); }, f);
  }
  if (id == "robustness") {
    return PureMeasure(id, [](const RVectord& v) { return spectral::robustness(v); }, MeasureFlags{});
  }
  if (id == "schmidt_rank") {
    MeasureFlags f;
    f.vanishes_on_product = false;
    return PureMeasure(id, [](const RVectord& v) { return double(spectral::schmidt_rank(v)); }, f);
  }
  if (id.rfind("e_k:", 0) == 0) {
    int k = 0;
    const char* first = id.data() + 4;
    const char* last = id.data() + id.size();
    const auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec != std::errc() || ptr != last || first == last) throw ArgumentError("malformed measure id '" + id + "'");
    return make_e_k(k);
  }
  throw ArgumentError("unknown measure id '" + id + "'");
}

std::vector<std::string> measure_ids(int max_k) {
  std::vector<std::string> ids{"entropy", "concurrence", "geometric", "robustness", "schmidt_rank"};
  for (int k = 1; k <= max_k; ++k) ids.push_back("e_k:" + std::to_string(k));
  return ids;
}

} // namespace qext
