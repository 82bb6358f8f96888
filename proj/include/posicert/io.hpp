#pragma once
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "posicert/analysis.hpp"
#include "posicert/certs.hpp"
#include "posicert/lift.hpp"
#include "posicert/search.hpp"

namespace posicert {

using Json = nlohmann::json;

// Every reader throws ParseError on malformed input. Coefficients are exact
// fraction strings ("3", "-7/2"); generator indices in certificates are 0-based.

/// {"nvars": n, "terms": [{"exp": [...], "coef": "p/q"}]} in grlex order.
Json to_json(const Polynomial& p);
/// Accepts the canonical form or {"nvars": n, "expr": "1 - x1^2"}.
Polynomial polynomial_from_json(const Json& j);

/// {"nvars": n, "gens": [polynomial...], "labels": [...]}. On input each
/// generator may also be an expression string.
Json to_json(const GeneratorSystem& sys);
GeneratorSystem system_from_json(const Json& j);

Json to_json(const SosList& s);
SosList sos_from_json(const Json& j, std::size_t nvars);

/// {"kind": "R"|"Q"|"T", "budget": r, "system": {...} or "path.json", ...}.
/// With `system_path`, the system is written as that reference instead of inline.
Json to_json(const Certificate& cert, const std::optional<std::string>& system_path = std::nullopt);
/// A string "system" is resolved relative to `base_dir`. Budgets are audited by
/// verify, not enforced here.
Certificate certificate_from_json(const Json& j, const std::filesystem::path& base_dir = {});

Json to_json(const VerifyReport& rep);
Json to_json(const RungReport& rep);
Json to_json(const SearchOutcome& out);
Json to_json(const LiftedProblem& lp);
Json to_json(const RangeReport& rep);
Json to_json(const LiftTrace& trace);
Json to_json(const BoundInputs& in);
/// Fields absent from `j` keep their defaults with provenance "default".
BoundInputs bound_inputs_from_json(const Json& j);
Json to_json(const KappaEstimate& est);
Json to_json(const LojaEstimate& est);
Json to_json(const DegreeBoundReport& rep);
Json to_json(const GapCheck& rep);
Json to_json(const PropBoundCheck& rep);

Json read_json_file(const std::filesystem::path& path);
/// Canonical text: sorted keys, the given indent (-1 for one line), trailing newline.
std::string dump_json(const Json& j, int indent = 2);
void write_json_file(const std::filesystem::path& path, const Json& j, int indent = 2);

}  // namespace posicert
