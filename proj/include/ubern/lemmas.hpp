#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ubern {

/// Range overrides for a lemma sweep. Unset fields fall back to each
/// lemma's default grid; fields a lemma does not use are ignored.
struct LemmaRanges {
  std::optional<unsigned> k_max;
  std::optional<unsigned> a_max;
  std::optional<unsigned> i_max;
  std::optional<unsigned> l_max;
  std::optional<unsigned> m_max;
  std::optional<unsigned> n_max;
  std::optional<unsigned> N_max;
  std::optional<unsigned> samples;
  std::uint64_t seed = 0x5eed;
};

/// One clause of a lemma swept over its grid.
struct LemmaPart {
  std::string label;
  std::uint64_t instances = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> examples;  ///< first few failing instances
};

struct LemmaSummary {
  std::string id;
  std::string statement;
  std::vector<LemmaPart> parts;

  bool holds() const;
  std::uint64_t instances() const;
  std::string to_text() const;
  std::string to_json(int indent = -1) const;
};

/// Lemma ids accepted by run_lemma, in order.
const std::vector<std::string>& lemma_ids();

/// Sweeps the lemma over its grid. Throws PreconditionError for an unknown id.
LemmaSummary run_lemma(const std::string& id, const LemmaRanges& ranges = {});

}  // namespace ubern
