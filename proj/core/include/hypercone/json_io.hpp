#pragma once

#include <memory>
#include <nlohmann/json_fwd.hpp>

#include "hypercone/cones.hpp"
#include "hypercone/dfw.hpp"
#include "hypercone/harness.hpp"
#include "hypercone/polyform.hpp"

namespace hypercone {

/// Polynomial JSON:
///   Sparse:        {"n": int, "d": int, "monomials": [{"exp": [int], "coef": float}]}
///   EleSym:        {"elesym": {"n": int, "k": int}}
///   LinearFactors: {"factors": [[float]]}
nlohmann::json polynomial_to_json(const PolynomialForm& poly);
PolynomialForm polynomial_from_json(const nlohmann::json& j);

/// Cone JSON: {"kind": "hyperbolicity"|"pcone"|"orthant"|"derivative_orthant", ...}
///   hyperbolicity:      {"poly": <poly>, "e": [float], "isometric": bool?}
///   pcone:              {"p": float, "n": int}          (ambient n+1)
///   orthant:            {"n": int}
///   derivative_orthant: {"n": int, "k": int}
std::shared_ptr<const ConeOracle> cone_from_json(const nlohmann::json& j);

/// Problem JSON: {"objective": {"Q": "identity"|[[...]], "c": [...]},
///                "T": "identity"|[[...]], "b": [...], "cone": <cone>}
ConicProgram program_from_json(const nlohmann::json& j);

/// Instance spec JSON: {"cone": <cone>, "seed": int, "count": int,
///                      "reject_threshold": float?}
InstanceSpec instance_spec_from_json(const nlohmann::json& j);

} // namespace hypercone
