#include "qdesign/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qdesign::io {

namespace {

using Json = nlohmann::ordered_json;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Json vector_to_json(const ComplexVector& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json& j, int dim) {
  require(j.contains("re"), "matrix needs a \"re\" array of rows");
  const auto& re = j.at("re");
  require(re.is_array() && static_cast<int>(re.size()) == dim,
          "matrix \"re\" must have dim rows");
  ComplexMatrix m(dim, dim);
  const bool has_im = j.contains("im");
  for (int i = 0; i < dim; ++i) {
    const auto& re_row = re.at(static_cast<size_t>(i));
    require(re_row.is_array() && static_cast<int>(re_row.size()) == dim,
            "matrix rows must have dim entries");
    for (int k = 0; k < dim; ++k) {
      double imag = 0.0;
      if (has_im) imag = j.at("im").at(static_cast<size_t>(i)).at(static_cast<size_t>(k));
      m(i, k) = Complex(re_row.at(static_cast<size_t>(k)).get<double>(), imag);
    }
  }
  return m;
}

ComplexVector vector_from_json(const Json& j, int dim) {
  require(j.contains("re"), "vector needs a \"re\" array");
  const auto& re = j.at("re");
  require(re.is_array() && static_cast<int>(re.size()) == dim,
          "vector \"re\" must have dim entries");
  ComplexVector v(dim);
  const bool has_im = j.contains("im");
  for (int i = 0; i < dim; ++i) {
    double imag = 0.0;
    if (has_im) imag = j.at("im").at(static_cast<size_t>(i));
    v[i] = Complex(re.at(static_cast<size_t>(i)).get<double>(), imag);
  }
  return v;
}

// Density-style payload of an element: either an explicit matrix or a pure
// state vector expanded to its projector.
ComplexMatrix operator_from_element(const Json& element, int dim) {
  if (element.contains("matrix")) return matrix_from_json(element.at("matrix"), dim);
  require(element.contains("vector"), "element needs a \"matrix\" or a \"vector\"");
  const PureState psi{vector_from_json(element.at("vector"), dim)};
  return psi.projector();
}

Json parse(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  require(!j.is_discarded(), "malformed JSON document");
  return j;
}

int dim_of(const Json& j) {
  require(j.contains("dim") && j.at("dim").is_number_integer(),
          "document needs an integer \"dim\"");
  const int dim = j.at("dim").get<int>();
  require(dim > 0, "\"dim\" must be positive");
  return dim;
}

} // namespace

std::string ensemble_to_json(const Ensemble& ensemble) {
  Json j;
  j["dim"] = ensemble.dim();
  Json elements = Json::array();
  for (const auto& el : ensemble.elements()) {
    elements.push_back(
        Json{{"weight", el.weight}, {"matrix", matrix_to_json(el.state.matrix())}});
  }
  j["elements"] = std::move(elements);
  return j.dump(2) + "\n";
}

Ensemble ensemble_from_json(const std::string& text) {
  const Json j = parse(text);
  const int dim = dim_of(j);
  require(j.contains("elements") && j.at("elements").is_array() && !j.at("elements").empty(),
          "ensemble needs a nonempty \"elements\" array");
  std::vector<Ensemble::Element> elements;
  for (const auto& el : j.at("elements")) {
    require(el.contains("weight"), "ensemble elements need a \"weight\"");
    elements.push_back({el.at("weight").get<double>(),
                        DensityOperator(operator_from_element(el, dim))});
  }
  return Ensemble(dim, std::move(elements));
}

std::string povm_to_json(const Povm& povm) {
  Json j;
  j["dim"] = povm.dim();
  Json elements = Json::array();
  for (const auto& effect : povm.elements())
    elements.push_back(Json{{"matrix", matrix_to_json(effect.matrix())}});
  j["elements"] = std::move(elements);
  return j.dump(2) + "\n";
}

Povm povm_from_json(const std::string& text) {
  const Json j = parse(text);
  const int dim = dim_of(j);
  require(j.contains("elements") && j.at("elements").is_array() && !j.at("elements").empty(),
          "POVM needs a nonempty \"elements\" array");
  std::vector<Effect> effects;
  for (const auto& el : j.at("elements"))
    effects.push_back(Effect(operator_from_element(el, dim)));
  return Povm(dim, std::move(effects));
}

std::string fiducial_to_json(const PureState& fiducial) {
  Json j;
  j["kind"] = "sic-fiducial";
  j["dim"] = fiducial.dim();
  j["elements"] = Json::array({Json{{"vector", vector_to_json(fiducial.amplitudes())}}});
  return j.dump(2) + "\n";
}

std::string set_to_json(const WeightedStateSet& set, const std::string& kind) {
  Json j;
  j["kind"] = kind;
  j["dim"] = set.dim;
  Json elements = Json::array();
  for (const auto& p : set.points) {
    elements.push_back(
        Json{{"weight", p.weight}, {"vector", vector_to_json(p.state.amplitudes())}});
  }
  j["elements"] = std::move(elements);
  if (set.labels) {
    Json labels = Json::array();
    for (const auto& [b, x] : *set.labels) labels.push_back(Json::array({b, x}));
    j["labels"] = std::move(labels);
  }
  return j.dump(2) + "\n";
}

std::string set_to_json(const MixedStateSet& set, const std::string& kind) {
  Json j;
  j["kind"] = kind;
  j["dim"] = set.dim;
  Json elements = Json::array();
  for (const auto& p : set.points) {
    elements.push_back(
        Json{{"weight", p.weight}, {"matrix", matrix_to_json(p.state.matrix())}});
  }
  j["elements"] = std::move(elements);
  if (set.labels) {
    Json labels = Json::array();
    for (const auto& [b, x] : *set.labels) labels.push_back(Json::array({b, x}));
    j["labels"] = std::move(labels);
  }
  if (set.purity_parameter) j["purity_parameter"] = *set.purity_parameter;
  return j.dump(2) + "\n";
}

SetDocument set_from_json(const std::string& text) {
  const Json j = parse(text);
  require(j.contains("kind") && j.at("kind").is_string(),
          "set file needs a \"kind\" tag (sic-fiducial, state-set or mub-set)");
  SetDocument doc;
  doc.kind = j.at("kind").get<std::string>();
  const int dim = dim_of(j);
  require(j.contains("elements") && j.at("elements").is_array() && !j.at("elements").empty(),
          "set file needs a nonempty \"elements\" array");
  const auto& elements = j.at("elements");

  if (doc.kind == "sic-fiducial") {
    require(elements.size() == 1 && elements.front().contains("vector"),
            "a sic-fiducial file holds exactly one \"vector\" element");
    doc.fiducial = PureState{vector_from_json(elements.front().at("vector"), dim)};
    return doc;
  }
  require(doc.kind == "state-set" || doc.kind == "mub-set",
          "unknown set kind: " + doc.kind);

  std::optional<std::vector<std::pair<int, int>>> labels;
  if (j.contains("labels")) {
    std::vector<std::pair<int, int>> parsed;
    for (const auto& l : j.at("labels")) {
      require(l.is_array() && l.size() == 2, "labels must be [b, x] pairs");
      parsed.emplace_back(l.at(0).get<int>(), l.at(1).get<int>());
    }
    require(parsed.size() == elements.size(), "one label per element required");
    labels = std::move(parsed);
  }
  require(doc.kind != "mub-set" || labels.has_value(), "mub-set files need \"labels\"");

  bool all_vectors = true;
  for (const auto& el : elements)
    if (!el.contains("vector")) all_vectors = false;

  const double uniform = 1.0 / static_cast<double>(elements.size());
  if (all_vectors) {
    WeightedStateSet set;
    set.dim = dim;
    set.labels = labels;
    for (const auto& el : elements) {
      const double w = el.contains("weight") ? el.at("weight").get<double>() : uniform;
      set.points.push_back({w, PureState{vector_from_json(el.at("vector"), dim)}});
    }
    doc.pure_set = std::move(set);
  } else {
    MixedStateSet set;
    set.dim = dim;
    set.labels = labels;
    for (const auto& el : elements) {
      const double w = el.contains("weight") ? el.at("weight").get<double>() : uniform;
      set.points.push_back({w, DensityOperator(operator_from_element(el, dim))});
    }
    if (j.contains("purity_parameter"))
      set.purity_parameter = j.at("purity_parameter").get<double>();
    doc.mixed_set = std::move(set);
  }
  return doc;
}

std::string with_manifest(const std::string& document, const std::string& manifest) {
  Json doc = parse(document);
  doc["manifest"] = parse(manifest);
  return doc.dump(2) + "\n";
}

Ensemble load_ensemble(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const Json j = parse(text);
  if (j.contains("kind")) {
    const SetDocument doc = set_from_json(text);
    require(!doc.fiducial.has_value(),
            "a fiducial file is not an ensemble; construct the set first");
    return doc.pure_set ? as_ensemble(*doc.pure_set) : as_ensemble(*doc.mixed_set);
  }
  return ensemble_from_json(text);
}

Povm load_povm(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const Json j = parse(text);
  if (j.contains("kind")) {
    const SetDocument doc = set_from_json(text);
    require(!doc.fiducial.has_value(),
            "a fiducial file is not a POVM; construct the set first");
    return doc.pure_set ? as_povm(*doc.pure_set) : as_povm(*doc.mixed_set);
  }
  return povm_from_json(text);
}

SetDocument load_set(const std::filesystem::path& path) {
  return set_from_json(read_file(path));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

} // namespace qdesign::io
