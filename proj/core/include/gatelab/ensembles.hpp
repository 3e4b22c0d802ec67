#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gatelab/gate_algebra.hpp"
#include "gatelab/rng.hpp"

namespace gatelab {

/// n x n unitary from the Haar measure: complex Ginibre matrix, QR factorized,
/// with the columns of Q rescaled by the phases of diag(R).
ComplexMatrix haar_unitary(std::size_t n, Rng& rng);

/// Diagonal N^2 x N^2 gate with i.i.d. phases uniform on [0, 2 pi).
BipartiteGate diagonal_unitary(std::size_t n_local, Rng& rng);

/// U^A (x) U^B with independent Haar factors from U(N).
BipartiteGate local_pair(std::size_t n_local, Rng& rng);

/// |0><0| (x) 1 + |1><1| (x) sigma_x.
BipartiteGate cnot_gate();

/// P1 (x) 1 + P2 (x) v, where P2 projects subsystem A onto its last
/// `projector_rank` basis states and P1 = 1 - P2. Requires
/// 1 <= projector_rank <= N - 1 and a unitary N x N `v`.
BipartiteGate controlled_gate(std::size_t projector_rank, const ComplexMatrix& v);

/// Haar-averaged form factor <|tr V^n|^2> over U(N): min(n, N).
double form_factor(std::size_t n_local, std::size_t n);

struct ControlledPrediction {
  double ep = 0.0;
  double gt = 0.0;
};

/// e_p and g_t of U^n (no interlacing) for a balanced controlled gate with Haar
/// V, obtained by substituting the form factor into
/// X_1 = (N^2 + |tr V^n|^2) / 2N^2, Y_1 = 1/N^2.
ControlledPrediction controlled_power_prediction(std::size_t n_local, std::size_t n);

enum class EnsembleKind { haar, diagonal, local_pair, controlled, fixed };

std::string_view to_string(EnsembleKind kind);
/// Throws ValidationError on an unknown name.
EnsembleKind parse_ensemble_kind(std::string_view name);

/// Declarative description of a gate distribution.
///
/// `matrix` is the kind-specific payload: the controlled V (N x N, optional;
/// a Haar V is drawn per sample when absent) or the fixed gate (N^2 x N^2,
/// required). `projector_rank` is used by `controlled` only; 0 selects the
/// balanced split N / 2.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::haar;
  std::size_t n_local = 2;
  std::uint64_t seed = 0;
  std::size_t projector_rank = 0;
  std::optional<ComplexMatrix> matrix;

  bool operator==(const EnsembleSpec&) const = default;
};

/// Throws ValidationError when the payload does not fit the kind.
void validate(const EnsembleSpec& spec);

/// Sample `index` of the ensemble, drawn from substream (seed, index).
BipartiteGate draw(const EnsembleSpec& spec, std::uint64_t index = 0);

/// {"kind", "n_local", "seed", "payload"}; matrices as row-major [re, im] pairs.
std::string to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_from_json(std::string_view text);

/// {"n_local", "matrix": [[re, im], ...]} with N^4 row-major entries.
std::string gate_to_json(const BipartiteGate& gate);
/// Throws ValidationError naming the violated check.
BipartiteGate gate_from_json(std::string_view text);

}  // namespace gatelab
