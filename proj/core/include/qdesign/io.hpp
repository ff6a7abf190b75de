#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "qdesign/designs.hpp"
#include "qdesign/quantum_core.hpp"

namespace qdesign::io {

// All documents are JSON:
//   {"dim": d, "elements": [{"weight": w, "matrix": {"re": [[..]], "im": [[..]]}}, ...]}
// with "re"/"im" as row-major lists of rows. "weight" appears in ensembles
// and set files but not in POVMs. Pure states may be written as
// {"vector": {"re": [..], "im": [..]}} and are expanded to projectors when
// a density matrix or effect is required. Set files carry
// "kind": "sic-fiducial" | "state-set" | "mub-set"; MUB sets add 0-based
// "labels": [[b, x], ...].

std::string ensemble_to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const std::string& text);

std::string povm_to_json(const Povm& povm);
Povm povm_from_json(const std::string& text);

struct SetDocument {
  std::string kind;
  std::optional<PureState> fiducial;
  std::optional<WeightedStateSet> pure_set;
  std::optional<MixedStateSet> mixed_set;
};

std::string fiducial_to_json(const PureState& fiducial);
std::string set_to_json(const WeightedStateSet& set, const std::string& kind);
std::string set_to_json(const MixedStateSet& set, const std::string& kind);
SetDocument set_from_json(const std::string& text);

/// Inserts a "manifest" key into a JSON document.
std::string with_manifest(const std::string& document, const std::string& manifest);

/// Ensemble/POVM loaders that also accept set files (dispatch on "kind").
Ensemble load_ensemble(const std::filesystem::path& path);
Povm load_povm(const std::filesystem::path& path);
SetDocument load_set(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// FNV-1a 64-bit content hash, hex-encoded; used in run manifests.
std::string content_hash(const std::string& bytes);

} // namespace qdesign::io
