#pragma once

// Random well-formed documents for round-trip and determinism checks.

#include <algorithm>
#include <random>
#include <string>

#include "oracles.hpp"

namespace oracle {

inline berkskel::Document random_document(std::mt19937_64& rng) {
  using namespace berkskel;
  const std::uint64_t primes[] = {0, 2, 3, 5, 7};
  ResidueCharacteristic p(primes[uniform(rng, 0, 4)]);
  Model model;
  if (uniform(rng, 0, 2) == 0) {
    model = tate_model(uniform(rng, 1, 5), random_positive(rng, 4), p);
  } else {
    std::int64_t n = uniform(rng, 1, 9);
    model = kummer_model(n, p, random_positive(rng, 3));
  }
  Document doc = model_document(model);
  // Extra free-standing graphs, germs, flags and profiles.
  for (std::int64_t k = uniform(rng, 0, 2); k > 0; --k) doc.graphs["G" + std::to_string(k)] = random_graph(rng, 4);
  auto& d = doc.differents["delta"].data;
  if (!d.listed_branches.empty()) {
    auto& germs = d.listed_branches.begin()->second;
    for (std::int64_t k = uniform(rng, 0, 3); k > 0; --k) {
      germs.push_back({GermKind::off_skeleton, {}, uniform(rng, 1, 9), random_rational(rng, -3, 3)});
    }
    // Germ lists are kept in the order serialize() writes them.
    std::stable_sort(germs.begin(), germs.end(), [](const BranchGerm& a, const BranchGerm& b) {
      return detail::germ_key(a) < detail::germ_key(b);
    });
  }
  if (uniform(rng, 0, 3) == 0) doc.differents["delta"].ramification_in_vertices = false;
  if (uniform(rng, 0, 3) == 0) d.generic_flag.begin()->second = false;
  if (!p.is_zero()) {
    for (std::int64_t k = uniform(rng, 0, 3); k > 0; --k) {
      doc.profiles["f" + std::to_string(k)] = random_profile(rng, p, 3);
    }
  }
  for (std::int64_t k = uniform(rng, 0, 2); k > 0; --k) doc.profiles["u" + std::to_string(k)] = random_unit_terminal(rng, 3);
  if (uniform(rng, 0, 2) == 0) doc.config.logs["w"] = LogValue(random_positive(rng, 5));
  return doc;
}

}  // namespace oracle
