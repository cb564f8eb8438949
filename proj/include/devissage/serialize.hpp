#pragma once

#include <json.hpp>
#include <string>

#include "devissage/witt.hpp"

namespace devissage {

using json = nlohmann::json;

json to_json(const Scalar& s);
json to_json(const Matrix& m);
json to_json(const ModulePresentation& m);
json to_json(const ModuleMorphism& f);
json to_json(const Complex& c);
/// Chain map with source/target given by reference ids into a bundle.
json to_json(const ChainMap& f, const std::string& source_id, const std::string& target_id);
json to_json(const Homotopy& h);
json to_json(const ModuleForm& f);
json to_json(const ModuleComplex& c);
/// Bundle: {"complexes": {id: ...}, "maps": {"phi": ...}, ...}.
json to_json(const ComplexForm& f);
json to_json(const CokernelInvariants& inv);
json to_json(const WittClass& w);
json to_json(const std::vector<JordanBlock>& blocks);
/// Ordered step list; each entry carries its witnesses.
json ledger_to_json(const Reduction& r);

Ring ring_from_json(const json& j);
Matrix matrix_from_json(const Ring& ring, const json& j);
ModulePresentation module_from_json(const json& j);
ModuleMorphism morphism_from_json(const json& j);
/// Validates dd = 0 (NotAComplex) and shapes.
Complex complex_from_json(const json& j);
ModuleComplex module_complex_from_json(const json& j);
ModuleForm module_form_from_json(const json& j);
ComplexForm complex_form_from_json(const json& j);

/// FNV-1a over the compact dump; stable across runs and platforms.
std::string digest(const json& j);

}  // namespace devissage
