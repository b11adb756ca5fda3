#pragma once

#include <string>

#include "companion.hpp"
#include "harness.hpp"
#include "jsr.hpp"
#include "limit.hpp"
#include "simulation.hpp"
#include "vecm.hpp"

namespace cksvar {

// JSON documents for the command-line tool and the C API. Numbers are written
// with 17 significant digits.
std::string to_json(const CaseClassification& c);
std::string to_json(const AssumptionReport& r);
std::string to_json(const JsrEstimate& e, const CompanionSet& set);
std::string to_json(const McReport& r, bool with_samples = false);
std::string to_json(const ResidualReport& r);
std::string canonical_to_json(const CanonicalModel& cm);
std::string examples_to_json();

// Case-specific objects (Pi factors, projections, kappa or the kink geometry).
std::string objects_to_json(const VecmForm& v, const CaseClassification& c);

// {"n_list": [...], "reps": ..., ...}; the model is supplied separately.
McSpec mc_spec_from_json(const std::string& text, const CksvarModel& model);
ParamMap params_from_json(const std::string& text);

std::string path_to_csv(const Path& path);
std::string limit_to_csv(const LimitPath& lp);
std::string samples_to_csv(const McReport& r);

// Parse a simulate CSV back into y and x (for round-trip checks).
Path path_from_csv(const std::string& text, int p);

std::string fmt17(double v);

}  // namespace cksvar
