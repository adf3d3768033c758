#pragma once

#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/funcprep.hpp"

namespace qsynth {

/// Deletes uncontrolled X pairs on a qubit with no gate touching it in
/// between, repeated until nothing changes.
Circuit remove_double_x(const Circuit& c);

enum class McxMode {
  /// X gates with >= 3 controls become a ladder of Toffolis computing the
  /// AND of the controls into k-1 appended ancilla, a CX, and the uncompute.
  ToTrueToffoli,
  /// Toffolis become CSX / CX / CSXdg / CX / CSX. Wider X gates are laddered
  /// first.
  ToffoliTo5Gate,
};

Circuit decompose_mcx(const Circuit& c, McxMode mode);

/// Ladders every non-X gate with >= 2 controls down to one control (the X
/// case is handled by decompose_mcx).
Circuit decompose_controlled(const Circuit& c);

/// Rewrites to {rx, ry, rz, cx, x, h, measure}; exact up to global phase.
Circuit lower_to_uniform(const Circuit& c);

/// Replaces each run of consecutive rotations on one target that share a
/// control set of size >= 2 by a Gray-code sequence of uncontrolled
/// rotations and single-control CX (RY/RZ) or CZ (RX) gates. Missing
/// control patterns are treated as zero angles.
Circuit graycode_optimize(const Circuit& c);

enum class Symmetry { Duplicate, Mirror, Auto };

bool has_symmetry(const Pmf& pmf, Symmetry kind);

/// State preparation that exploits root symmetry: duplicate halves become an
/// H on the top qubit, mirrored halves an H plus a CX fan-out. The half is
/// prepared recursively the same way. Throws NoSymmetry if the requested
/// symmetry is absent at the root.
Circuit symmetric_optimize(const Pmf& pmf, Symmetry kind);

/// Runs named circuit passes in order: double-x, mcx-ladder, toffoli-5,
/// graycode, uniform.
Circuit apply_passes(const Circuit& c, const std::vector<std::string>& passes);

}  // namespace qsynth
