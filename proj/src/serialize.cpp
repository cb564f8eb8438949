#include "devissage/serialize.hpp"

#include <cstdio>

namespace devissage {

namespace {

Scalar scalar_from_json(const Ring& ring, const json& j) {
  if (j.is_number_integer()) return ring.from_int(j.get<long>());
  return ring.parse_element(j.get<std::string>());
}

std::map<int, Matrix> comps_from_json(const Ring& ring, const json& j) {
  std::map<int, Matrix> out;
  for (const auto& [k, v] : j.items()) out.emplace(std::stoi(k), matrix_from_json(ring, v));
  return out;
}

json comps_to_json(const std::map<int, Matrix>& comps) {
  json j = json::object();
  for (const auto& [r, m] : comps) j[std::to_string(r)] = to_json(m);
  return j;
}

}  // namespace

json to_json(const Scalar& s) { return s.get_str(); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

json to_json(const ModulePresentation& m) {
  return {{"ring", m.ring.descriptor()}, {"generators", m.g()}, {"relations", to_json(m.relations)}};
}

json to_json(const ModuleMorphism& f) {
  return {{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"matrix", to_json(f.matrix)}};
}

json to_json(const Complex& c) {
  json j{{"ring", c.ring().descriptor()}, {"lo", c.is_zero() ? 0 : c.lo()}, {"ranks", c.ranks()}};
  j["differentials"] = comps_to_json(c.differentials());
  return j;
}

json to_json(const ChainMap& f, const std::string& source_id, const std::string& target_id) {
  return {{"source", source_id}, {"target", target_id}, {"components", comps_to_json(f.comps)}};
}

json to_json(const Homotopy& h) { return comps_to_json(h.maps); }

json to_json(const ModuleForm& f) {
  return {{"kind", "module-form"},
          {"module", to_json(f.module)},
          {"dual", to_json(f.phi.target)},
          {"phi", to_json(f.phi.matrix)},
          {"epsilon", f.epsilon},
          {"convention", f.standard ? "standard" : "unsigned"}};
}

json to_json(const ModuleComplex& c) {
  json mods = json::array(), maps = json::object();
  for (const auto& m : c.modules) mods.push_back(to_json(m));
  for (const auto& [r, f] : c.maps) maps[std::to_string(r)] = to_json(f.matrix);
  return {{"ring", c.ring.descriptor()}, {"lo", c.lo}, {"modules", mods}, {"maps", maps}};
}

json to_json(const ComplexForm& f) {
  json j{{"kind", "complex-form"},
         {"epsilon", f.epsilon},
         {"convention", f.standard ? "standard" : "unsigned"},
         {"complexes", {{"E", to_json(f.object)}, {"DE", to_json(f.phi.target)}}},
         {"maps", {{"phi", to_json(f.phi, "E", "DE")}}}};
  if (f.symmetry) j["symmetry"] = to_json(*f.symmetry);
  return j;
}

json to_json(const CokernelInvariants& inv) {
  json f = json::array();
  for (const auto& x : inv.factors) f.push_back(to_json(x));
  return {{"free_rank", inv.free_rank}, {"factors", f}};
}

json to_json(const WittClass& w) {
  json parts = json::array();
  for (const auto& [p, d0] : w.parts)
    parts.push_back({{"prime", p}, {"rank_parity", d0.rank_parity}, {"discriminant", to_json(d0.discriminant)}});
  return {{"zero", w.is_zero()}, {"parts", parts}};
}

json to_json(const std::vector<JordanBlock>& blocks) {
  json out = json::array();
  for (const auto& b : blocks)
    out.push_back({{"prime", b.prime}, {"scale", b.scale}, {"rank", b.rank}, {"unit_class", b.unit_class}});
  return out;
}

json ledger_to_json(const Reduction& r) {
  json steps = json::array();
  for (std::size_t i = 0; i < r.ledger.size(); ++i) {
    const auto& e = r.ledger[i];
    json s{{"index", i}};
    switch (e.kind) {
      case LedgerEntry::Kind::Minimize:
      case LedgerEntry::Kind::Truncate: {
        s["kind"] = e.kind == LedgerEntry::Kind::Minimize ? "minimize" : "truncate";
        s["after"] = to_json(e.isometry->after);
        s["isometry"] = to_json(e.isometry->isometry, "after.E", "before.E");
        break;
      }
      case LedgerEntry::Kind::Sublagrangian: {
        const ReductionStep& st = *e.step;
        s["kind"] = "sublagrangian";
        s["n"] = st.candidate.n;
        s["homology"] = to_json(st.candidate.homology);
        s["L"] = to_json(st.candidate.sub);
        s["nu"] = to_json(st.candidate.nu, "L", "before.E");
        s["null_homotopy"] = to_json(st.candidate.null_homotopy);
        s["mu0"] = to_json(st.mu0, "L", "P");
        s["attempts"] = st.attempts;
        s["after"] = to_json(st.result);
        s["isometry_homotopy"] = to_json(st.isometry_homotopy);
        break;
      }
    }
    steps.push_back(s);
  }
  return {{"input", to_json(r.input)}, {"steps", steps}, {"reduced", to_json(r.reduced)},
          {"extracted", to_json(r.extracted)}};
}

Ring ring_from_json(const json& j) { return Ring::parse(j.get<std::string>()); }

Matrix matrix_from_json(const Ring& ring, const json& j) {
  std::size_t rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
  Matrix m(ring, rows, cols);
  const json& e = j.at("entries");
  require_shape(e.size() == rows, "matrix row count");
  for (std::size_t i = 0; i < rows; ++i) {
    require_shape(e[i].size() == cols, "matrix column count");
    for (std::size_t k = 0; k < cols; ++k) m.set(i, k, scalar_from_json(ring, e[i][k]));
  }
  return m;
}

ModulePresentation module_from_json(const json& j) {
  Ring r = ring_from_json(j.at("ring"));
  return ModulePresentation::make(r, j.at("generators").get<std::size_t>(), matrix_from_json(r, j.at("relations")));
}

ModuleMorphism morphism_from_json(const json& j) {
  ModulePresentation s = module_from_json(j.at("source")), t = module_from_json(j.at("target"));
  return ModuleMorphism::make(s, t, matrix_from_json(s.ring, j.at("matrix")));
}

Complex complex_from_json(const json& j) {
  Ring r = ring_from_json(j.at("ring"));
  auto ranks = j.at("ranks").get<std::vector<std::size_t>>();
  if (ranks.empty()) return Complex(r);
  return Complex::make(r, j.at("lo").get<int>(), ranks, comps_from_json(r, j.at("differentials")));
}

ModuleComplex module_complex_from_json(const json& j) {
  Ring r = ring_from_json(j.at("ring"));
  int lo = j.at("lo").get<int>();
  std::vector<ModulePresentation> mods;
  for (const auto& m : j.at("modules")) mods.push_back(module_from_json(m));
  std::map<int, ModuleMorphism> maps;
  for (const auto& [k, v] : j.at("maps").items()) {
    int deg = std::stoi(k);
    maps.emplace(deg, ModuleMorphism::make(mods.at(deg - lo), mods.at(deg - 1 - lo), matrix_from_json(r, v)));
  }
  return ModuleComplex::make(r, lo, mods, maps);
}

ModuleForm module_form_from_json(const json& j) {
  ModulePresentation m = module_from_json(j.at("module"));
  ModulePresentation dv = dual_module(m);
  ModuleForm f{m, ModuleMorphism::make(m, dv, matrix_from_json(m.ring, j.at("phi"))), j.value("epsilon", 1),
               j.value("convention", std::string("unsigned")) == "standard"};
  return f;
}

ComplexForm complex_form_from_json(const json& j) {
  const json& cx = j.at("complexes");
  const json& phi = j.at("maps").at("phi");
  Complex e = complex_from_json(cx.at(phi.at("source").get<std::string>()));
  bool standard = j.value("convention", std::string("unsigned")) == "standard";
  Complex de = form_dual(e, standard);
  if (cx.contains(phi.at("target").get<std::string>()))
    require_shape(complex_from_json(cx.at(phi.at("target").get<std::string>())) == de, "target is not the dual");
  ComplexForm f{e, ChainMap::make(e, de, comps_from_json(e.ring(), phi.at("components"))), j.value("epsilon", 1),
                standard, std::nullopt};
  if (j.contains("symmetry")) f.symmetry = Homotopy{comps_from_json(e.ring(), j.at("symmetry"))};
  return f;
}

std::string digest(const json& j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace devissage
