#include "gatelab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>
#include <json.hpp>

#include "eigen_bridge.hpp"
#include "gatelab/errors.hpp"
#include "gatelab/measures.hpp"

namespace gatelab {

using nlohmann::json;

ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
  if (n < 1) throw ValidationError("haar_unitary: dimension must be at least 1");
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd ginibre(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) ginibre(r, c) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd& packed = qr.matrixQR();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Complex rcc = packed(c, c);
    const double mag = std::abs(rcc);
    q.col(c) *= mag > 0.0 ? rcc / mag : Complex(1.0);
  }
  return detail::from_eigen(q);
}

BipartiteGate diagonal_unitary(std::size_t n_local, Rng& rng) {
  if (n_local < 2) throw ValidationError("diagonal_unitary: local dimension must be at least 2");
  std::vector<Complex> phases(n_local * n_local);
  for (Complex& z : phases) z = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  return BipartiteGate(n_local, ComplexMatrix::diagonal(phases));
}

BipartiteGate local_pair(std::size_t n_local, Rng& rng) {
  if (n_local < 2) throw ValidationError("local_pair: local dimension must be at least 2");
  ComplexMatrix a = haar_unitary(n_local, rng);
  ComplexMatrix b = haar_unitary(n_local, rng);
  return BipartiteGate(n_local, kron(a, b));
}

BipartiteGate cnot_gate() {
  ComplexMatrix m(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return BipartiteGate(2, std::move(m));
}

BipartiteGate controlled_gate(std::size_t projector_rank, const ComplexMatrix& v) {
  const std::size_t n = v.rows();
  if (!v.is_square() || n < 2) {
    throw ValidationError("controlled_gate: V must be square with dimension at least 2");
  }
  if (projector_rank < 1 || projector_rank > n - 1) {
    throw ValidationError("controlled_gate: projector rank must lie in [1, N-1], got " +
                          std::to_string(projector_rank));
  }
  if (!(unitarity_defect(v) <= kUnitarityTolerance)) {
    throw ValidationError("controlled_gate: V is not unitary");
  }
  ComplexMatrix m(n * n, n * n);
  for (std::size_t a = 0; a < n; ++a) {
    const bool controlled = a >= n - projector_rank;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        m(a * n + r, a * n + c) = controlled ? v(r, c) : Complex(r == c ? 1.0 : 0.0);
      }
    }
  }
  return BipartiteGate(n, std::move(m));
}

double form_factor(std::size_t n_local, std::size_t n) {
  return static_cast<double>(std::min(n, n_local));
}

ControlledPrediction controlled_power_prediction(std::size_t n_local, std::size_t n) {
  if (n < 1) throw ValidationError("controlled_power_prediction: n must be at least 1");
  if (n_local < 2) throw ValidationError("controlled_power_prediction: N must be at least 2");
  const double d = static_cast<double>(n_local * n_local);
  const PurityPair p{(d + form_factor(n_local, n)) / (2.0 * d), 1.0 / d};
  return {entangling_power_from_purities(p, n_local), gate_typicality_from_purities(p, n_local)};
}

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::haar: return "haar";
    case EnsembleKind::diagonal: return "diagonal";
    case EnsembleKind::local_pair: return "local_pair";
    case EnsembleKind::controlled: return "controlled";
    case EnsembleKind::fixed: return "fixed";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  for (EnsembleKind k : {EnsembleKind::haar, EnsembleKind::diagonal, EnsembleKind::local_pair,
                         EnsembleKind::controlled, EnsembleKind::fixed}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown ensemble kind '" + std::string(name) + "'");
}

namespace {

std::size_t balanced_rank(const EnsembleSpec& spec) {
  return spec.projector_rank != 0 ? spec.projector_rank : std::max<std::size_t>(1, spec.n_local / 2);
}

json matrix_to_json(const ComplexMatrix& m) {
  json arr = json::array();
  for (const Complex& z : m.entries()) arr.push_back({z.real(), z.imag()});
  return arr;
}

ComplexMatrix matrix_from_json(const json& arr, std::size_t dim, const char* what) {
  if (!arr.is_array()) throw ValidationError(std::string(what) + ": expected an array");
  if (arr.size() != dim * dim) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(dim * dim) +
                          " entries, got " + std::to_string(arr.size()));
  }
  std::vector<Complex> entries;
  entries.reserve(arr.size());
  for (const json& pair : arr) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ValidationError(std::string(what) + ": each entry must be a [re, im] number pair");
    }
    entries.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return ComplexMatrix(dim, dim, std::move(entries));
}

json parse_object(std::string_view text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw ValidationError(std::string(what) + ": expected a JSON object");
  return j;
}

std::size_t read_count(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw ValidationError(std::string(what) + ": missing or invalid '" + key + "'");
  }
  return j[key].get<std::size_t>();
}

}  // namespace

void validate(const EnsembleSpec& spec) {
  if (spec.n_local < 2) throw ValidationError("ensemble: n_local must be at least 2");
  const std::size_t n = spec.n_local;
  switch (spec.kind) {
    case EnsembleKind::haar:
    case EnsembleKind::diagonal:
    case EnsembleKind::local_pair:
      if (spec.matrix) {
        throw ValidationError("ensemble: kind '" + std::string(to_string(spec.kind)) +
                              "' takes no matrix payload");
      }
      break;
    case EnsembleKind::controlled: {
      const std::size_t rank = balanced_rank(spec);
      if (rank < 1 || rank > n - 1) {
        throw ValidationError("ensemble: controlled projector rank must lie in [1, N-1]");
      }
      if (spec.matrix) {
        if (spec.matrix->rows() != n || spec.matrix->cols() != n) {
          throw ValidationError("ensemble: controlled V must be N x N");
        }
        if (!(unitarity_defect(*spec.matrix) <= kUnitarityTolerance)) {
          throw ValidationError("ensemble: controlled V is not unitary");
        }
      }
      break;
    }
    case EnsembleKind::fixed:
      if (!spec.matrix) throw ValidationError("ensemble: kind 'fixed' requires a matrix payload");
      if (spec.matrix->rows() != n * n || spec.matrix->cols() != n * n) {
        throw ValidationError("ensemble: fixed matrix must be N^2 x N^2");
      }
      break;
  }
}

BipartiteGate draw(const EnsembleSpec& spec, std::uint64_t index) {
  validate(spec);
  Rng rng = Rng::substream(spec.seed, index);
  const std::size_t n = spec.n_local;
  switch (spec.kind) {
    case EnsembleKind::haar:
      return BipartiteGate(n, haar_unitary(n * n, rng));
    case EnsembleKind::diagonal:
      return diagonal_unitary(n, rng);
    case EnsembleKind::local_pair:
      return local_pair(n, rng);
    case EnsembleKind::controlled:
      return controlled_gate(balanced_rank(spec), spec.matrix ? *spec.matrix : haar_unitary(n, rng));
    case EnsembleKind::fixed:
      return BipartiteGate(n, *spec.matrix);
  }
  throw ValidationError("ensemble: unknown kind");
}

std::string to_json(const EnsembleSpec& spec) {
  json payload = json::object();
  if (spec.kind == EnsembleKind::controlled) {
    payload["projector_rank"] = spec.projector_rank;
    if (spec.matrix) payload["v"] = matrix_to_json(*spec.matrix);
  } else if (spec.kind == EnsembleKind::fixed && spec.matrix) {
    payload["matrix"] = matrix_to_json(*spec.matrix);
  }
  json j{{"kind", std::string(to_string(spec.kind))},
         {"n_local", spec.n_local},
         {"seed", spec.seed},
         {"payload", payload}};
  return j.dump();
}

EnsembleSpec ensemble_from_json(std::string_view text) {
  const json j = parse_object(text, "ensemble");
  EnsembleSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ValidationError("ensemble: missing or invalid 'kind'");
  }
  spec.kind = parse_ensemble_kind(j["kind"].get<std::string>());
  spec.n_local = read_count(j, "n_local", "ensemble");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError("ensemble: invalid 'seed'");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  const json payload = j.value("payload", json::object());
  if (!payload.is_object()) throw ValidationError("ensemble: 'payload' must be an object");
  if (spec.kind == EnsembleKind::controlled) {
    if (payload.contains("projector_rank")) {
      spec.projector_rank = read_count(payload, "projector_rank", "ensemble payload");
    }
    if (payload.contains("v")) {
      spec.matrix = matrix_from_json(payload["v"], spec.n_local, "ensemble payload 'v'");
    }
  } else if (spec.kind == EnsembleKind::fixed) {
    if (!payload.contains("matrix")) {
      throw ValidationError("ensemble: kind 'fixed' requires payload.matrix");
    }
    spec.matrix =
        matrix_from_json(payload["matrix"], spec.n_local * spec.n_local, "ensemble payload 'matrix'");
  }
  validate(spec);
  return spec;
}

std::string gate_to_json(const BipartiteGate& gate) {
  json j{{"n_local", gate.n_local()}, {"matrix", matrix_to_json(gate.matrix())}};
  return j.dump();
}

BipartiteGate gate_from_json(std::string_view text) {
  const json j = parse_object(text, "gate file");
  const std::size_t n = read_count(j, "n_local", "gate file");
  if (n < 2) throw ValidationError("gate file: n_local must be at least 2");
  if (!j.contains("matrix")) throw ValidationError("gate file: missing 'matrix'");
  return BipartiteGate(n, matrix_from_json(j["matrix"], n * n, "gate file 'matrix'"));
}

}  // namespace gatelab
