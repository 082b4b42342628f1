#pragma once

#include <json.hpp>

#include "sympjet/interpolation.hpp"
#include "sympjet/sp_factor.hpp"
#include "sympjet/symplectic.hpp"
#include "sympjet/tame_sets.hpp"

namespace sympjet {

using json = nlohmann::json;

// Encoders. Complex numbers are [re, im]; points are lists of complex
// numbers; indices in TwoFormPoly and ElemFactor are 1-based.
json to_json(cplx c);
json to_json(const Vec& v);
json to_json(const Mat& m);
json to_json(const PolyScalar& p);
json to_json(const PolyMap& p);
json to_json(const JetMap& j);
json to_json(const TwoFormPoly& t);
json to_json(const HamiltonianDecomposition& h);
json to_json(const Factor& f);
json to_json(const FactorWord& w);
json to_json(const UniPoly& p);
json to_json(const WordFactor& f);
json to_json(const Word& w);
json to_json(const FlatPoint& f);
json to_json(const InterpolationJob& job);
json to_json(const VerifyReport& r);
json to_json(const ShellSet& s, bool with_points = true);
json to_json(const ShellCertificate& c);
json to_json(const LambdaImageReport& r);

// Decoders; malformed input raises SchemaError.
cplx cplx_from_json(const json& j);
Vec vec_from_json(const json& j);
Mat mat_from_json(const json& j);
std::vector<Vec> points_from_json(const json& j);
PolyScalar poly_from_json(const json& j, int nvars);
PolyMap polymap_from_json(const json& j, int nvars);
JetMap jet_from_json(const json& j);
UniPoly unipoly_from_json(const json& j);
FactorWord factor_word_from_json(const json& j);
Word word_from_json(const json& j);
FlatPoint flat_from_json(const json& j);
InterpolationJob job_from_json(const json& j);
std::vector<OsculationConstraint> constraints_from_json(const json& j);
CompactRegion region_from_json(const json& j);

}  // namespace sympjet
