// polyfun: exact invariants of functors from finite combinatorial categories.
//
// Subcommands: height, degree, cross-effect, cross-effect-functor, induce,
// taylor, check (braidable | conjugator | cati | star), verify, export.
// Input is a UTF-8 JSON spec file describing a category, a coefficient ring,
// and a functor (built-in or explicit presentation); see docs/spec-schema.md.
// Exit status: 0 all checks pass, 1 violation found, 2 input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyfun/catring.hpp"

using namespace polyfun;
using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Diagnostics

struct SpecError {
  std::string where;  // JSON-pointer-ish location inside the spec file
  std::string what;
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SpecError{where, what};
}

void expect(bool cond, const std::string& where, const std::string& what) {
  if (!cond) fail(where, what);
}

// ---------------------------------------------------------------------------
// Exact values <-> JSON. Integers beyond 2^53 travel as decimal strings;
// rationals as "p/q" strings.

mpq_class entry_from_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return mpq_class(long(v.get<int64_t>()));
  if (v.is_string()) {
    try {
      mpq_class q(v.get<std::string>());
      q.canonicalize();
      return q;
    } catch (...) {
      fail(where, "not a decimal integer or fraction string: " + v.dump());
    }
  }
  fail(where, "matrix entry must be an integer or a decimal string");
}

json int_to_json(const mpz_class& z) {
  static const mpz_class lim = mpz_class(1) << 53;
  if (z < lim && z > -lim) return json(z.get_si());
  return json(z.get_str());
}

json entry_to_json(const mpq_class& q) {
  if (q.get_den() == 1) return int_to_json(q.get_num());
  return json(q.get_str());
}

json mat_to_json(const Mat& M) {  // row-major
  json rows = json::array();
  for (int i = 0; i < M.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols; ++j) row.push_back(entry_to_json(M.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& v, int rows, int cols, const std::string& where) {
  expect(v.is_array(), where, "expected a row-major matrix (array of rows)");
  expect(int(v.size()) == rows, where,
         "expected " + std::to_string(rows) + " rows, got " + std::to_string(v.size()));
  Mat M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[i];
    std::string rw = where + "/" + std::to_string(i);
    expect(row.is_array() && int(row.size()) == cols, rw,
           "expected a row of length " + std::to_string(cols));
    for (int j = 0; j < cols; ++j)
      M.at(i, j) = entry_from_json(row[j], rw + "/" + std::to_string(j));
  }
  return M;
}

json invariants_to_json(const ModInvariants& inv) {
  json t = json::array();
  for (auto& z : inv.torsion) t.push_back(int_to_json(z));
  return json{{"torsion", std::move(t)}, {"free_rank", inv.free_rank}};
}

std::vector<int> int_list(const json& v, const std::string& where) {
  expect(v.is_array(), where, "expected an integer array");
  std::vector<int> out;
  for (auto& e : v) {
    expect(e.is_number_integer(), where, "expected an integer array");
    out.push_back(e.get<int>());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spec loading

struct Loaded {
  json raw;
  std::string path;
  std::string kind;
  FinCat cat;
  FinCat sigma;  // label-forgetting shadow for the wreath kind
  bool has_sigma = false;
  Ring ring = Ring::Z;
  uint64_t seed = 0;
  FunctorRep fun;
  bool has_fun = false;
  std::string builtin;  // empty for explicit presentations
};

const FinCat& shadow_of(Loaded& L) { return L.has_sigma ? L.sigma : L.cat; }

Ring parse_ring(const std::string& s, const std::string& where) {
  if (s == "Z") return Ring::Z;
  if (s == "Q") return Ring::Q;
  fail(where, "ring must be \"Z\" or \"Q\"");
}

FinCat build_category(const json& c, int window_override) {
  expect(c.is_object(), "/category", "expected an object");
  expect(c.contains("kind") && c["kind"].is_string(), "/category/kind",
         "missing category kind");
  std::string kind = c["kind"].get<std::string>();
  int w = window_override;
  if (w < 0) {
    expect(c.contains("window") && c["window"].is_number_integer(), "/category/window",
           "missing window");
    w = c["window"].get<int>();
  }
  expect(w >= 0 && w <= 8, "/category/window", "window must be between 0 and 8");
  if (kind == "fisharp") return build_fisharp(w);
  if (kind == "fi") return build_fi(w);
  if (kind == "oi") return build_oi(w);
  if (kind == "icat") return build_icat(w);
  if (kind == "cube") return build_cube(w);
  if (kind == "jn") return build_subset_poset(w, false);
  if (kind == "kn") return build_subset_poset(w, true);
  if (kind == "pointed") return build_pointed(w);
  if (kind == "chain") return build_chain(w);
  if (kind == "fisharp-g") {
    expect(c.contains("group_table") && c["group_table"].is_array(),
           "/category/group_table", "wreath kind needs a group multiplication table");
    std::vector<std::vector<int>> gtab;
    for (size_t i = 0; i < c["group_table"].size(); ++i)
      gtab.push_back(
          int_list(c["group_table"][i], "/category/group_table/" + std::to_string(i)));
    return build_fisharp_g(w, std::move(gtab));
  }
  fail("/category/kind", "unknown kind \"" + kind + "\"");
}

// Explicit functor: per-object presentations plus matrices for a generating
// set of morphisms; on the partial-injection kinds the remaining morphisms
// are completed by factorising payloads into swap/insert/delete generators.
void load_explicit_functor(Loaded& L, const json& f) {
  const FinCat& C = L.cat;
  expect(f.contains("objects") && f["objects"].is_array(), "/functor/objects",
         "explicit functor needs per-object presentations");
  expect(int(f["objects"].size()) == C.n_obj, "/functor/objects",
         "expected " + std::to_string(C.n_obj) + " entries (one per object)");
  auto mods = std::make_shared<std::vector<FPModule>>();
  std::vector<char> valid(C.n_obj, 1);
  for (int o = 0; o < C.n_obj; ++o) {
    const json& ob = f["objects"][o];
    std::string where = "/functor/objects/" + std::to_string(o);
    if (ob.is_null()) {
      valid[o] = 0;
      mods->push_back(FPModule::zero(L.ring));
      continue;
    }
    expect(ob.is_object() && ob.contains("gens") && ob["gens"].is_number_integer(),
           where, "expected {\"gens\": g, \"relations\": rows} or null");
    int g = ob["gens"].get<int>();
    expect(g >= 0, where + "/gens", "generator count must be nonnegative");
    Mat rel(g, 0);
    if (ob.contains("relations") && !ob["relations"].is_null()) {
      const json& r = ob["relations"];
      expect(r.is_array(), where + "/relations", "expected a row-major matrix");
      if (!r.empty())  // [] means no relation columns
        rel = mat_from_json(r, g, int(r[0].size()), where + "/relations");
    }
    mods->push_back(FPModule(L.ring, g, std::move(rel)));
  }

  auto mats = std::make_shared<std::map<int, Mat>>();
  if (f.contains("morphisms")) {
    expect(f["morphisms"].is_array(), "/functor/morphisms", "expected an array");
    for (size_t k = 0; k < f["morphisms"].size(); ++k) {
      const json& mo = f["morphisms"][k];
      std::string where = "/functor/morphisms/" + std::to_string(k);
      expect(mo.is_object() && mo.contains("src") && mo.contains("tgt") &&
                 mo.contains("data") && mo.contains("matrix"),
             where, "expected {src, tgt, data, matrix}");
      int s = mo["src"].get<int>(), t = mo["tgt"].get<int>();
      expect(s >= 0 && s < C.n_obj && t >= 0 && t < C.n_obj, where,
             "src/tgt out of range");
      std::vector<int> data = int_list(mo["data"], where + "/data");
      int id = C.find_mor(s, t, data);
      expect(id >= 0, where + "/data", "no such morphism in the category");
      if (!valid[s] || !valid[t]) continue;
      (*mats)[id] = mat_from_json(mo["matrix"], (*mods)[t].gens, (*mods)[s].gens,
                                  where + "/matrix");
    }
  }
  // complete: identities, then generator words on partial-injection kinds
  for (int o = 0; o < C.n_obj; ++o)
    if (valid[o]) (*mats)[C.ids[o]] = Mat::identity((*mods)[o].gens);
  for (size_t fid = 0; fid < C.mors.size(); ++fid) {
    const Mor& m = C.mors[fid];
    if (!valid[m.src] || !valid[m.tgt] || mats->count(int(fid))) continue;
    std::string where = "/functor/morphisms";
    expect(C.kind == CatKind::PartialInj, where,
           "missing matrix for morphism " + std::to_string(fid) +
               " (only partial-injection kinds complete from generators)");
    std::vector<GenStep> word = factorize_partial_injection(m.data, m.src, m.tgt);
    Mat acc = Mat::identity((*mods)[m.src].gens);
    int level = m.src;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      int tgt = gen_step_target(*it);
      int gid = C.find_mor(it->level, tgt, gen_step_data(*it));
      expect(gid >= 0, where,
             "generator step missing from the category for morphism " +
                 std::to_string(fid));
      auto mit = mats->find(gid);
      expect(mit != mats->end(), where,
             "no matrix given for generator morphism " + std::to_string(gid) +
                 " (needed to complete morphism " + std::to_string(fid) + ")");
      acc = mit->second * acc;
      level = tgt;
    }
    (void)level;
    (*mats)[int(fid)] = std::move(acc);
  }

  FunctorRep T;
  T.cat = &L.cat;
  T.ring = L.ring;
  T.valid = valid;
  T.obj_fn = [mods](int o) { return (*mods)[o]; };
  T.mor_fn = [mats](int fid) { return mats->at(fid); };
  L.fun = std::move(T);
  L.has_fun = true;
}

void load_functor(Loaded& L, const json& f) {
  if (f.is_null()) return;
  expect(f.is_object(), "/functor", "expected an object");
  if (!f.contains("builtin")) {
    load_explicit_functor(L, f);
    return;
  }
  std::string b = f["builtin"].get<std::string>();
  L.builtin = b;
  if (b == "Th") {
    expect(f.contains("h") && f["h"].is_number_integer(), "/functor/h",
           "builtin Th needs h");
    expect(L.cat.kind == CatKind::PartialInj, "/functor",
           "builtin Th needs a partial-injection kind");
    L.fun = build_Th(f["h"].get<int>(), L.cat, L.ring);
  } else if (b == "representable") {
    expect(f.contains("object") && f["object"].is_number_integer(), "/functor/object",
           "builtin representable needs an object");
    int k = f["object"].get<int>();
    expect(k >= 0 && k < L.cat.n_obj, "/functor/object", "object out of range");
    L.fun = representable_functor(L.cat, k, L.ring);
  } else if (b == "constant") {
    int rank = f.value("rank", 1);
    expect(rank >= 0, "/functor/rank", "rank must be nonnegative");
    L.fun = constant_functor(L.cat, L.ring, rank);
  } else if (b == "zero") {
    L.fun = zero_functor(L.cat, L.ring);
  } else if (b == "reduced-linearization") {
    expect(L.cat.kind == CatKind::Pointed, "/functor",
           "builtin reduced-linearization needs the pointed kind");
    L.fun = reduced_linearization(L.cat, L.ring);
  } else if (b == "random") {
    RandomFunctorParams par;
    if (f.contains("params")) {
      const json& p = f["params"];
      par.max_summands = p.value("max_summands", par.max_summands);
      par.max_rep_obj = p.value("max_rep_obj", par.max_rep_obj);
      par.max_relations = p.value("max_relations", par.max_relations);
      par.coeff_bound = p.value("coeff_bound", par.coeff_bound);
    }
    std::mt19937_64 rng(L.seed);
    L.fun = random_quotient_functor(L.cat, L.ring, rng, par);
  } else {
    fail("/functor/builtin", "unknown builtin \"" + b + "\"");
  }
  L.has_fun = true;
}

std::unique_ptr<Loaded> load_spec(const std::string& path, int window_override,
                                  const std::string& ring_override, uint64_t seed) {
  auto L = std::make_unique<Loaded>();
  L->path = path;
  L->seed = seed;
  std::ifstream in(path);
  if (!in) fail("", "cannot open file");
  try {
    L->raw = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("", std::string("parse error: ") + e.what());
  }
  expect(L->raw.is_object(), "", "top level must be a JSON object");
  expect(L->raw.contains("category"), "/category", "missing category");
  L->cat = build_category(L->raw["category"], window_override);
  L->kind = L->raw["category"]["kind"].get<std::string>();
  if (L->kind == "fisharp-g") {
    L->sigma = build_fisharp(L->cat.window);
    L->has_sigma = true;
  }
  long pairs = 0;  // composable pairs: the full axiom sweep is quadratic in homs
  for (int a = 0; a < L->cat.n_obj; ++a)
    for (int b = 0; b < L->cat.n_obj; ++b)
      for (int c = 0; c < L->cat.n_obj; ++c)
        pairs += long(L->cat.hom[a][b].size()) * long(L->cat.hom[b][c].size());
  if (pairs <= 100000) {
    std::string err;
    if (!validate_category(L->cat, &err)) fail("/category", "invalid category: " + err);
  }
  if (!ring_override.empty())
    L->ring = parse_ring(ring_override, "--ring");
  else if (L->raw.contains("ring"))
    L->ring = parse_ring(L->raw["ring"].get<std::string>(), "/ring");
  if (L->raw.contains("functor")) load_functor(*L, L->raw["functor"]);
  if (L->has_fun && pairs <= 100000) {
    FunctorReport rep = validate_functor(L->fun);
    if (!rep.ok()) fail("/functor", "validation failure: " + rep.violations.front());
  }
  return L;
}

const FunctorRep& need_functor(const Loaded& L) {
  if (!L.has_fun) fail("/functor", "this command needs a functor in the spec");
  return L.fun;
}

// ---------------------------------------------------------------------------
// Output plumbing

struct Out {
  bool as_json = false;
  json j;
  std::ostringstream text;

  explicit Out(const std::string& command, uint64_t seed) {
    j["command"] = command;
    j["seed"] = seed;
  }
  void emit() const {
    if (as_json)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << text.str();
  }
};

std::string inv_str(const ModInvariants& inv) { return inv.str(); }

// ---------------------------------------------------------------------------
// Command bodies (return exit code)

HeightMode parse_mode(const std::string& s) {
  if (s == "I" || s == "i") return HeightMode::I;
  if (s == "oplus") return HeightMode::Oplus;
  if (s == "fi") return HeightMode::FI;
  fail("--mode", "mode must be I, oplus, or fi");
}

CrossFlavor parse_flavor(const std::string& s) {
  if (s == "cr") return CrossFlavor::Cr;
  if (s == "crbar") return CrossFlavor::CrBar;
  if (s == "crbarprime") return CrossFlavor::CrBarPrime;
  fail("--flavor", "flavor must be cr, crbar, or crbarprime");
}

DegreeVariant parse_variant(const std::string& s) {
  if (s == "deg") return DegreeVariant::Deg;
  if (s == "ideg") return DegreeVariant::IDeg;
  if (s == "sdeg") return DegreeVariant::SDeg;
  if (s == "wdeg") return DegreeVariant::WDeg;
  fail("--variant", "variant must be deg, ideg, sdeg, or wdeg");
}

int cmd_height(Loaded& L, Out& out, const std::string& mode_s,
               const std::string& flavor_s) {
  const FunctorRep& T = need_functor(L);
  HeightMode mode = parse_mode(mode_s);
  HeightReport rep;
  if (mode == HeightMode::FI) {
    rep = height_fi(T, L.cat.window);
  } else {
    expect(L.cat.kind == CatKind::PartialInj || L.cat.kind == CatKind::WreathInj,
           "/category", "height needs a partial-injection kind");
    IStructure ist = istructure_of(L.cat);
    rep = height(T, ist, mode, parse_flavor(flavor_s), L.cat.window);
  }
  out.j["mode"] = mode_name(rep.mode);
  out.j["flavor"] = flavor_name(rep.flavor);
  out.j["window"] = rep.window;
  out.j["height"] = rep.value;
  out.j["subobject_checks_ok"] = rep.subobject_checks_ok;
  json ws = json::array();
  for (auto& w : rep.witnesses)
    ws.push_back(json{{"m", w.m},
                      {"level", w.n},
                      {"lambda", w.lambda},
                      {"invariants", invariants_to_json(w.inv)}});
  out.j["witnesses"] = std::move(ws);
  out.text << "height (mode " << mode_name(rep.mode) << ", flavor "
           << flavor_name(rep.flavor) << ", window " << rep.window
           << ") = " << rep.value << "\n";
  for (auto& w : rep.witnesses) {
    out.text << "  level " << w.n << ": witness at m = " << w.m;
    if (!w.lambda.empty()) {
      out.text << ", lambda = (";
      for (size_t i = 0; i < w.lambda.size(); ++i)
        out.text << (i ? "," : "") << w.lambda[i];
      out.text << ")";
    }
    out.text << ", invariants " << inv_str(w.inv) << "\n";
  }
  if (!rep.subobject_checks_ok) {
    out.text << "  subobject form disagreement detected\n";
    return 1;
  }
  return 0;
}

int cmd_degree(Loaded& L, Out& out, const std::string& variant_s, int K) {
  const FunctorRep& T = need_functor(L);
  expect(L.cat.kind == CatKind::PartialInj || L.cat.kind == CatKind::WreathInj,
         "/category", "degree needs a partial-injection kind");
  DegreeVariant v = parse_variant(variant_s);
  Stabiliser st = stabiliser_structure(L.cat, K);
  DegreeReport rep = degree(T, st, v);
  out.j["variant"] = variant_name(rep.variant);
  out.j["stabilisers"] = K;
  out.j["value"] = rep.value.d;
  out.j["exact"] = rep.value.exact;
  out.j["trace"] = rep.trace;
  out.text << variant_name(rep.variant) << " = " << rep.value.str() << " (with " << K
           << " stabiliser" << (K == 1 ? "" : "s") << ")\n";
  for (auto& t : rep.trace) out.text << "  " << t << "\n";
  return 0;
}

int cmd_cross_effect(Loaded& L, Out& out, const std::string& flavor_s, int m,
                     const std::vector<int>& lambda) {
  const FunctorRep& T = need_functor(L);
  CrossFlavor fl = parse_flavor(flavor_s);
  ModInvariants inv;
  if (!lambda.empty()) {
    expect(m >= 0, "--m", "partition form needs --m");
    expect(L.cat.kind == CatKind::PartialInj || L.cat.kind == CatKind::WreathInj,
           "/category", "partition form needs a partial-injection kind");
    int sum = 0;
    for (int p : lambda) sum += p;
    expect(sum == m, "--lambda", "partition parts must sum to m");
    IStructure ist = istructure_of(L.cat);
    ShiftedPartition lam{lambda};
    inv = module_invariants(partition_cross_effect(T, ist, m, lam, fl));
    out.j["m"] = m;
    out.j["lambda"] = lambda;
  } else {
    inv = module_invariants(cross_effect(T, fl));
  }
  out.j["flavor"] = flavor_name(fl);
  out.j["invariants"] = invariants_to_json(inv);
  out.text << "cross-effect (" << flavor_name(fl) << ") invariants: " << inv_str(inv)
           << "\n";
  return 0;
}

int cmd_cross_effect_functor(Loaded& L, Out& out, int n, bool decompose) {
  const FunctorRep& T = need_functor(L);
  expect(L.cat.kind == CatKind::PartialInj || L.cat.kind == CatKind::WreathInj,
         "/category", "needs a partial-injection kind");
  expect(n >= 0 && n <= L.cat.window, "--grade", "grade out of window");
  CatIStructure cst = cati_self(L.cat, shadow_of(L));
  int rc = 0;
  json pieces = json::array();
  out.text << "graded cross-effect pieces at grade " << n << ":\n";
  for (auto& p : cross_effect_pieces(T, cst, n)) {
    ModInvariants inv = module_invariants(p.module);
    pieces.push_back(json{{"k", p.k},
                          {"l", p.l},
                          {"invariants", invariants_to_json(inv)},
                          {"endomorphisms", int(p.endos.size())},
                          {"actions_ok", p.actions_ok}});
    out.text << "  (k=" << p.k << ", l=" << p.l << "): " << inv_str(inv) << ", "
             << p.endos.size() << " block endomorphisms"
             << (p.actions_ok ? "" : " [action failure]") << "\n";
    if (!p.actions_ok) rc = 1;
  }
  out.j["grade"] = n;
  out.j["pieces"] = std::move(pieces);
  if (decompose) {
    DecompReport d = equivariant_decomposition_check(T, cst, n);
    out.j["decomposition"] =
        json{{"lhs", invariants_to_json(d.lhs)},
             {"rhs", invariants_to_json(d.rhs)},
             {"invariants_match", d.invariants_match},
             {"characters_match", d.characters_match},
             {"ok", d.ok()}};
    out.text << "  induction decomposition: lhs " << inv_str(d.lhs) << ", rhs "
             << inv_str(d.rhs) << ", invariants "
             << (d.invariants_match ? "match" : "differ") << ", characters "
             << (d.characters_match ? "match" : "differ") << "\n";
    if (!d.ok()) rc = 1;
  }
  return rc;
}

CatFunctor inclusion_between(const FinCat& sub, const FinCat& big) {
  CatFunctor F;
  F.src = &sub;
  F.tgt = &big;
  F.obj_map.resize(sub.n_obj);
  for (int o = 0; o < sub.n_obj; ++o) F.obj_map[o] = o;
  F.mor_map.resize(sub.mors.size());
  for (size_t f = 0; f < sub.mors.size(); ++f) {
    const Mor& m = sub.mors[f];
    int id = big.find_mor(m.src, m.tgt, m.data);
    expect(id >= 0, "/category", "category does not include into fisharp payload-wise");
    F.mor_map[f] = id;
  }
  return F;
}

int cmd_induce(Loaded& L, Out& out, bool check_unit) {
  const FunctorRep& T = need_functor(L);
  expect(L.cat.kind == CatKind::PartialInj, "/category",
         "induce needs one of the partial-injection kinds");
  FinCat fs = build_fisharp(L.cat.window);
  CatFunctor F = inclusion_between(L.cat, fs);
  Induction ind = induce_along(F, T);
  out.text << "induction along the inclusion into the full partial-injection "
              "category, window "
           << L.cat.window << ":\n";
  json objs = json::array();
  for (int b = 0; b < fs.n_obj; ++b) {
    ModInvariants inv = module_invariants(ind.fun.obj(b));
    objs.push_back(json{{"object", b}, {"invariants", invariants_to_json(inv)}});
    out.text << "  object " << b << ": " << inv_str(inv) << "\n";
  }
  out.j["objects"] = std::move(objs);
  int rc = 0;
  if (check_unit) {
    NatTrans unit = adjunction_unit(F, T, ind);
    json comps = json::array();
    bool all_iso = true;
    for (int a = 0; a < L.cat.n_obj; ++a) {
      if (!T.obj_valid(a)) continue;
      ModuleHom h(unit.source.obj(a), unit.target.obj(a), unit.comp.at(a));
      HomDecomposition d = hom_decompose(h);
      bool inj = is_zero_module(d.kernel.source);
      bool surj = is_zero_module(d.cokernel.target);
      all_iso = all_iso && inj && surj;
      comps.push_back(json{{"object", a}, {"injective", inj}, {"surjective", surj}});
      out.text << "  unit at object " << a << ": " << (inj ? "injective" : "kernel")
               << ", " << (surj ? "surjective" : "cokernel") << "\n";
    }
    out.j["unit"] = std::move(comps);
    out.j["unit_iso"] = all_iso;
  }
  return rc;
}

int cmd_taylor(Loaded& L, Out& out, int d, int at) {
  const FunctorRep& T = need_functor(L);
  expect(L.cat.kind == CatKind::Pointed, "/category",
         "taylor needs the pointed kind");
  expect(d >= 0, "--degree", "degree must be nonnegative");
  FunctorRep pd = taylor_approximation(T, d);
  json objs = json::array();
  out.text << "taylor approximation p_" << d << ":\n";
  for (int c = 0; c < L.cat.n_obj; ++c) {
    if (at >= 0 && c != at) continue;
    if (!pd.obj_valid(c)) continue;
    ModInvariants before = module_invariants(T.obj(c));
    ModInvariants after = module_invariants(pd.obj(c));
    objs.push_back(json{{"object", c},
                        {"functor", invariants_to_json(before)},
                        {"approximation", invariants_to_json(after)}});
    out.text << "  at [" << c << "]: " << inv_str(before) << "  ->  "
             << inv_str(after) << "\n";
  }
  out.j["degree"] = d;
  out.j["objects"] = std::move(objs);
  return 0;
}

int cmd_check_braidable(Loaded& L, Out& out, int K) {
  expect(L.cat.kind == CatKind::PartialInj || L.cat.kind == CatKind::WreathInj,
         "/category", "braidable needs a partial-injection kind");
  Stabiliser st = stabiliser_structure(L.cat, K);
  auto psi = check_braidable(st);
  out.j["braidable"] = psi.has_value();
  if (psi) out.j["psi"] = *psi;
  out.text << (psi ? "braidable: yes" : "braidable: no") << "\n";
  if (psi) {
    out.text << "  psi payload:";
    for (int v : *psi) out.text << " " << v;
    out.text << "\n";
  }
  return psi ? 0 : 1;
}

int cmd_check_conjugator(Loaded& L, Out& out, int n, const std::vector<int>& from,
                         const std::vector<int>& to) {
  expect(L.cat.kind == CatKind::PartialInj, "/category",
         "conjugator needs a partial-injection kind");
  if (n < 0) n = L.cat.window;
  expect(n <= L.cat.window, "--grade", "grade out of window");
  auto to_mask = [n](const std::vector<int>& xs, const char* flag) {
    uint32_t m = 0;
    for (int x : xs) {
      expect(x >= 1 && x <= n, flag, "subset entries must lie in 1..n");
      m |= 1u << (x - 1);
    }
    return m;
  };
  json pairs = json::array();
  int missing = 0, total = 0;
  auto one = [&](uint32_t R, uint32_t S) {
    ++total;
    auto c = find_conjugator(L.cat, n, R, S);
    json p{{"from", mask_elements(R)}, {"to", mask_elements(S)},
           {"found", c.has_value()}};
    if (c) p["conjugator"] = L.cat.mors[*c].data;
    else ++missing;
    pairs.push_back(std::move(p));
  };
  if (!from.empty() || !to.empty()) {
    expect(from.size() == to.size(), "--to", "subsets must have equal size");
    one(to_mask(from, "--from"), to_mask(to, "--to"));
  } else {
    for (uint32_t R : subsets_of(n))
      for (uint32_t S : subsets_of(n))
        if (popcount32(R) == popcount32(S)) one(R, S);
  }
  out.j["grade"] = n;
  out.j["pairs"] = std::move(pairs);
  out.j["missing"] = missing;
  out.text << "conjugators at grade " << n << ": " << (total - missing) << "/" << total
           << " pairs found\n";
  return missing ? 1 : 0;
}

int cmd_check_cati(Loaded& L, Out& out) {
  expect(L.cat.kind == CatKind::PartialInj || L.cat.kind == CatKind::WreathInj,
         "/category", "cati needs a partial-injection kind");
  CatIStructure cst = cati_self(L.cat, shadow_of(L));
  CatIReport rep = check_cati_axioms(cst);
  out.j["inclusion_ok"] = rep.inclusion_ok;
  out.j["end_surjective"] = rep.end_surjective;
  out.j["aut_surjective"] = rep.aut_surjective;
  out.j["locality_ok"] = rep.locality_ok;
  out.j["failures"] = rep.failures;
  out.text << "axioms: inclusion " << (rep.inclusion_ok ? "ok" : "FAIL")
           << ", endomorphism surjectivity " << (rep.end_surjective ? "ok" : "FAIL")
           << ", automorphism surjectivity " << (rep.aut_surjective ? "ok" : "FAIL")
           << ", locality " << (rep.locality_ok ? "ok" : "FAIL") << "\n";
  for (auto& fmsg : rep.failures) out.text << "  " << fmsg << "\n";
  return rep.ok() ? 0 : 1;
}

int cmd_check_star(Loaded& L, Out& out, int n, int l) {
  expect(L.cat.kind == CatKind::PartialInj || L.cat.kind == CatKind::WreathInj,
         "/category", "star needs a partial-injection kind");
  if (n < 0) n = L.cat.window;
  expect(n <= L.cat.window, "--grade", "grade out of window");
  CatIStructure cst = cati_self(L.cat, shadow_of(L));
  json squares = json::array();
  int rc = 0;
  for (int li = (l < 0 ? 0 : l); li <= (l < 0 ? n : l); ++li) {
    MonoidSquare sq = block_square(cst, n, li);
    StarReport rep = check_property_star(sq);
    squares.push_back(json{{"n", n},
                           {"l", li},
                           {"surjective", rep.surjective},
                           {"coherent", rep.coherent},
                           {"x_size", int(rep.X.size())}});
    out.text << "factorisation square (n=" << n << ", l=" << li << "): "
             << (rep.holds() ? "holds" : "FAILS") << " (|X| = " << rep.X.size()
             << ")\n";
    for (auto& fmsg : rep.failures) out.text << "  " << fmsg << "\n";
    if (!rep.holds()) rc = 1;
  }
  out.j["squares"] = std::move(squares);
  return rc;
}

// ---------------------------------------------------------------------------
// Verification suites

struct SuiteResult {
  std::string name;
  int checks = 0;
  std::vector<std::string> violations;
};

SuiteResult suite_cross_effects(int max_n, int samples, uint64_t seed) {
  SuiteResult r{"cross-effects"};
  std::mt19937_64 rng(seed);
  for (int n = 1; n <= max_n; ++n) {
    FinCat cube = build_cube(n);
    FinCat J = build_subset_poset(n, false);
    FinCat K = build_subset_poset(n, true);
    CatFunctor z = z_functor(J, cube);
    CatFunctor zp = zprime_functor(K, cube);
    for (int t = 0; t < samples; ++t) {
      FunctorRep f = random_quotient_functor(cube, Ring::Z, rng);
      ++r.checks;
      ModInvariants a = module_invariants(cross_effect(f, CrossFlavor::Cr));
      ModInvariants b =
          module_invariants(cross_effect(precompose(f, z), CrossFlavor::CrBar));
      ModInvariants c =
          module_invariants(cross_effect(precompose(f, zp), CrossFlavor::CrBarPrime));
      if (!(a == b && a == c))
        r.violations.push_back("n=" + std::to_string(n) + " sample " +
                               std::to_string(t) + ": " + a.str() + " / " + b.str() +
                               " / " + c.str());
    }
  }
  return r;
}

SuiteResult suite_th_heights() {
  SuiteResult r{"th-heights"};
  for (int h : {2, 3}) {
    FinCat icat = build_icat(2 * h + 1);
    FunctorRep Th = build_Th(h, icat);
    IStructure ist = istructure_of(icat);
    ++r.checks;
    int hi = height(Th, ist, HeightMode::I, CrossFlavor::Cr, icat.window).value;
    if (hi != 1)
      r.violations.push_back("T_" + std::to_string(h) + " mode I height " +
                             std::to_string(hi) + " != 1");
    ++r.checks;
    int ho = height(Th, ist, HeightMode::Oplus, CrossFlavor::Cr, icat.window).value;
    if (ho != h)
      r.violations.push_back("T_" + std::to_string(h) + " mode oplus height " +
                             std::to_string(ho) + " != " + std::to_string(h));
  }
  return r;
}

SuiteResult suite_degrees() {
  SuiteResult r{"degrees"};
  FinCat fs = build_fisharp(3);
  FunctorRep Z = zero_functor(fs, Ring::Z);
  Stabiliser st = stabiliser_structure(fs);
  for (DegreeVariant v : {DegreeVariant::WDeg, DegreeVariant::Deg, DegreeVariant::IDeg,
                          DegreeVariant::SDeg}) {
    ++r.checks;
    DegreeReport rep = degree(Z, st, v);
    if (!(rep.value == DegreeValue{-1, true}))
      r.violations.push_back(std::string(variant_name(v)) + "(0) = " +
                             rep.value.str() + " != Exact(-1)");
  }
  return r;
}

int cmd_verify(Out& out, std::vector<std::string> suites, int max_n, int samples,
               uint64_t seed) {
  if (suites.empty()) suites = {"cross-effects", "th-heights", "degrees"};
  bool budget_hit = false;
  if (max_n > 4) { max_n = 4; budget_hit = true; }
  if (samples > 500) { samples = 500; budget_hit = true; }
  std::vector<SuiteResult> results;
  for (auto& s : suites) {
    if (s == "cross-effects")
      results.push_back(suite_cross_effects(max_n, samples, seed));
    else if (s == "th-heights")
      results.push_back(suite_th_heights());
    else if (s == "degrees")
      results.push_back(suite_degrees());
    else
      fail("--suite", "unknown suite \"" + s + "\" (cross-effects, th-heights, degrees)");
  }
  int rc = 0;
  json js = json::array();
  for (auto& r : results) {
    js.push_back(json{{"suite", r.name},
                      {"checks", r.checks},
                      {"violations", r.violations}});
    out.text << "suite " << r.name << ": " << r.checks << " checks, "
             << r.violations.size() << " violations\n";
    for (auto& v : r.violations) out.text << "  " << v << "\n";
    if (!r.violations.empty()) rc = 1;
  }
  out.j["suites"] = std::move(js);
  out.j["budget_clamped"] = budget_hit;
  if (budget_hit) out.text << "note: sizes clamped to the suite budget\n";
  return rc;
}

// ---------------------------------------------------------------------------
// Export: write the loaded functor back out as a fully explicit spec.

int cmd_export(Loaded& L, const std::string& out_path) {
  const FunctorRep& T = need_functor(L);
  json spec;
  spec["category"] = L.raw["category"];
  spec["category"]["window"] = L.cat.window;
  spec["ring"] = L.ring == Ring::Z ? "Z" : "Q";
  json objs = json::array();
  for (int o = 0; o < L.cat.n_obj; ++o) {
    if (!T.obj_valid(o)) {
      objs.push_back(nullptr);
      continue;
    }
    const FPModule& M = T.obj(o);
    objs.push_back(json{{"gens", M.gens}, {"relations", mat_to_json(M.rel)}});
  }
  json mors = json::array();
  for (size_t f = 0; f < L.cat.mors.size(); ++f) {
    const Mor& m = L.cat.mors[f];
    if (!T.mor_valid(int(f))) continue;
    if (int(f) == L.cat.ids[m.src] && m.src == m.tgt) continue;
    mors.push_back(json{{"src", m.src},
                        {"tgt", m.tgt},
                        {"data", m.data},
                        {"matrix", mat_to_json(T.mor(int(f)))}});
  }
  spec["functor"] = json{{"objects", std::move(objs)}, {"morphisms", std::move(mors)}};
  std::ofstream os(out_path);
  if (!os) fail("", "cannot write " + out_path);
  os << spec.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact invariants of functors from finite combinatorial categories"};
  app.require_subcommand(1);

  std::string spec_path, format = "text", ring_override, mode = "I", flavor = "cr",
              variant = "deg", check_what, export_path;
  std::vector<std::string> suites;
  int window = -1, stabilisers = 1, m_arg = -1, grade = -1, block = -1, deg_d = 0,
      at_obj = -1, max_n = 3, samples = 50;
  uint64_t seed = 0;
  bool decompose = false, check_unit = false;
  std::vector<int> lambda, from_set, to_set;

  auto add_common = [&](CLI::App* c, bool with_spec = true) {
    if (with_spec) c->add_option("spec", spec_path, "JSON spec file")->required();
    c->add_option("--window", window, "override the category window");
    c->add_option("--ring", ring_override, "coefficient ring: Z or Q");
    c->add_option("--seed", seed, "64-bit seed for all sampling");
    c->add_option("--format", format, "output format: text or json");
  };

  CLI::App* c_height = app.add_subcommand("height", "cross-effect height of a functor");
  add_common(c_height);
  c_height->add_option("--mode", mode, "I, oplus, or fi");
  c_height->add_option("--flavor", flavor, "cr, crbar, or crbarprime");

  CLI::App* c_degree = app.add_subcommand("degree", "recursive degree of a functor");
  add_common(c_degree);
  c_degree->add_option("--variant", variant, "deg, ideg, sdeg, or wdeg");
  c_degree->add_option("--stabilisers", stabilisers, "number of stabilised points");

  CLI::App* c_cr = app.add_subcommand("cross-effect", "a single cross-effect module");
  add_common(c_cr);
  c_cr->add_option("--flavor", flavor, "cr, crbar, or crbarprime");
  c_cr->add_option("--m", m_arg, "evaluate at grade m (partition form)");
  c_cr->add_option("--lambda", lambda, "shifted partition parts (first may be 0)");

  CLI::App* c_crf =
      app.add_subcommand("cross-effect-functor", "graded cross-effect pieces");
  add_common(c_crf);
  c_crf->add_option("--grade", grade, "total grade n")->required();
  c_crf->add_flag("--decompose", decompose, "also certify the induction decomposition");

  CLI::App* c_ind =
      app.add_subcommand("induce", "induce along the inclusion into fisharp");
  add_common(c_ind);
  c_ind->add_flag("--unit", check_unit, "check the adjunction unit components");

  CLI::App* c_tay = app.add_subcommand("taylor", "polynomial approximation");
  add_common(c_tay);
  c_tay->add_option("--degree", deg_d, "approximation degree d")->required();
  c_tay->add_option("--at", at_obj, "restrict output to one object");

  CLI::App* c_check = app.add_subcommand("check", "structural checks on a category");
  add_common(c_check, false);
  c_check->add_option("what", check_what, "braidable | conjugator | cati | star")
      ->required();
  c_check->add_option("spec", spec_path, "JSON spec file")->required();
  c_check->add_option("--stabilisers", stabilisers, "braidable: stabilised points");
  c_check->add_option("--grade", grade, "conjugator/star: grade n");
  c_check->add_option("--block", block, "star: block split l (default: all)");
  c_check->add_option("--from", from_set, "conjugator: source subset");
  c_check->add_option("--to", to_set, "conjugator: target subset");

  CLI::App* c_verify = app.add_subcommand("verify", "seeded property suites");
  add_common(c_verify, false);
  c_verify->add_option("--suite", suites, "cross-effects, th-heights, degrees");
  c_verify->add_option("--max-n", max_n, "largest cube size for cross-effects");
  c_verify->add_option("--samples", samples, "random samples per size");

  CLI::App* c_export = app.add_subcommand("export", "write a fully explicit spec");
  add_common(c_export);
  c_export->add_option("--out", export_path, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    expect(format == "text" || format == "json", "--format",
           "format must be text or json");
    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    if (name == "check") name += " " + check_what;
    Out out(name, seed);
    out.as_json = format == "json";
    int rc = 0;
    if (sub == c_verify) {
      rc = cmd_verify(out, suites, max_n, samples, seed);
    } else {
      auto L = load_spec(spec_path, window, ring_override, seed);
      out.j["spec"] = spec_path;
      if (sub == c_height) rc = cmd_height(*L, out, mode, flavor);
      else if (sub == c_degree) rc = cmd_degree(*L, out, variant, stabilisers);
      else if (sub == c_cr) rc = cmd_cross_effect(*L, out, flavor, m_arg, lambda);
      else if (sub == c_crf) rc = cmd_cross_effect_functor(*L, out, grade, decompose);
      else if (sub == c_ind) rc = cmd_induce(*L, out, check_unit);
      else if (sub == c_tay) rc = cmd_taylor(*L, out, deg_d, at_obj);
      else if (sub == c_export) { return cmd_export(*L, export_path); }
      else if (sub == c_check) {
        if (check_what == "braidable") rc = cmd_check_braidable(*L, out, stabilisers);
        else if (check_what == "conjugator")
          rc = cmd_check_conjugator(*L, out, grade, from_set, to_set);
        else if (check_what == "cati") rc = cmd_check_cati(*L, out);
        else if (check_what == "star") rc = cmd_check_star(*L, out, grade, block);
        else fail("check", "unknown check \"" + check_what + "\"");
      }
    }
    out.j["exit"] = rc;
    out.emit();
    return rc;
  } catch (const SpecError& e) {
    std::cerr << (spec_path.empty() ? "polyfun" : spec_path)
              << (e.where.empty() ? "" : ": " + e.where) << ": " << e.what << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
