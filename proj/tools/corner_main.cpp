// Command-line front end: build algebras, validate modules, slice and
// reconstruct, run the property suites and the orbifold experiments.
#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "corner/io.hpp"
#include "corner/orbifold.hpp"
#include "corner/sampling.hpp"

using namespace corner;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string field = "rational";
  std::uint64_t seed = 0;
  bool timings = false;

  std::string spec, module_path, bundle_path, covering, out, module_out, n_spec;
  int m = 2;
  int truncation = -1;
};

using Clock = std::chrono::steady_clock;

json report_envelope(const Options& opt, const std::string& command) {
  json j;
  j["schema"] = "corner-report/1";
  j["command"] = command;
  j["field"] = opt.field;
  j["seed"] = opt.seed;
  return j;
}

void emit(const Options& opt, json report, Clock::time_point t0) {
  if (opt.timings) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    report["timings_ms"] = {{"total", ms}};
  }
  if (!opt.out.empty()) write_text_file(opt.out, dump_report(report));
}

std::vector<long> parse_isotype(const std::string& s) {
  std::vector<long> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    require(!tok.empty(), "parse", "empty entry in isotype vector '" + s + "'");
    try {
      out.push_back(std::stol(tok));
    } catch (const std::exception&) {
      fail("parse", "bad isotype entry '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <Field F>
json dims_json(const FDModule<F>& m) {
  json out = json::object();
  for (int v = 0; v < m.alg->vertex_count(); ++v)
    out[m.alg->vertex_names[static_cast<std::size_t>(v)]] = m.dims[static_cast<std::size_t>(v)];
  return out;
}

template <Field F>
int cmd_algebra_build(const Options& opt, bool inspect) {
  auto t0 = Clock::now();
  IoContext<F> ctx;
  auto alg = ctx.algebra(opt.spec);
  alg->check_invariants(alg->dim() > 48 ? 20000 : 0);
  json rep = report_envelope(opt, inspect ? "algebra inspect" : "algebra build");
  rep["input"] = {{"path", opt.spec}, {"digest", file_digest(opt.spec)}};
  rep["dim"] = alg->dim();
  rep["truncation_level"] = alg->level;
  rep["vertices"] = json::array();
  for (const auto& name : alg->vertex_names) rep["vertices"].push_back(name);
  rep["source"] = alg->vertex_names[static_cast<std::size_t>(alg->source)];
  if (inspect) {
    json basis = json::array();
    for (int b = 0; b < alg->dim(); ++b) {
      const BasisElem& el = alg->basis[static_cast<std::size_t>(b)];
      basis.push_back({{"tail", alg->vertex_names[static_cast<std::size_t>(el.tail)]},
                       {"head", alg->vertex_names[static_cast<std::size_t>(el.head)]},
                       {"path", word_to_json(*alg->quiver, el.rep)}});
    }
    rep["basis"] = std::move(basis);
  }
  emit(opt, rep, t0);
  std::cout << "algebra ok: dim " << alg->dim() << ", " << alg->vertex_count() << " vertices, level "
            << alg->level << "\n";
  return 0;
}

template <Field F>
int cmd_algebra_mckay(const Options& opt) {
  require(opt.truncation >= 1, "parse", "--truncation is required (>= 1)");
  require(!opt.out.empty(), "parse", "--out is required");
  write_text_file(opt.out, dump_report(mckay_spec_json<F>(opt.m, opt.truncation)));
  std::cout << "wrote framed McKay algebra document for m=" << opt.m << ", level " << opt.truncation
            << " to " << opt.out << "\n";
  return 0;
}

template <Field F>
int cmd_module(const Options& opt, bool info) {
  auto t0 = Clock::now();
  IoContext<F> ctx;
  LoadedModule<F> lm = ctx.module(opt.module_path);
  lm.module.validate();
  json rep = report_envelope(opt, info ? "module info" : "module validate");
  rep["input"] = {{"path", opt.module_path}, {"digest", file_digest(opt.module_path)}};
  rep["valid"] = true;
  rep["dims"] = dims_json(lm.module);
  rep["total_dim"] = lm.module.total_dim();
  rep["zero_generated"] = is_zero_generated(lm.module);
  rep["cornered"] = lm.corner.has_value();
  if (info) rep["endomorphism_dim"] = static_cast<int>(hom_space(lm.module, lm.module).size());
  emit(opt, rep, t0);
  std::cout << "module ok: total dim " << lm.module.total_dim()
            << (is_zero_generated(lm.module) ? ", 0-generated" : ", not 0-generated") << "\n";
  return 0;
}

template <Field F>
int cmd_slice(const Options& opt) {
  IoContext<F> ctx;
  LoadedModule<F> lm = ctx.module(opt.module_path);
  require(!lm.corner.has_value(), "parse", "slicing expects a module over the full algebra");
  Covering cov = covering_from_string(*lm.module.alg, opt.covering);
  SliceBundle<F> b = slice(lm.module, cov);

  fs::path outp = opt.out;
  fs::path dir = outp.parent_path().empty() ? fs::path(".") : outp.parent_path();
  std::string stem = outp.stem().string();
  fs::path algrel = fs::relative(fs::weakly_canonical(lm.algebra_path), fs::weakly_canonical(dir));

  json bj;
  bj["schema"] = "corner-bundle/1";
  bj["algebra_ref"] = algrel.string();
  bj["covering"] = covering_to_json(*lm.module.alg, cov);
  bj["provenance"] = "sliced-from-module";
  bj["slices"] = json::array();
  for (std::size_t t = 0; t < b.slices.size(); ++t) {
    std::string name = stem + ".slice" + std::to_string(t) + ".json";
    write_text_file(dir / name, dump_report(corner_module_to_json(b.corners[t], b.slices[t], algrel.string())));
    bj["slices"].push_back(name);
  }
  write_text_file(outp, dump_report(bj));
  std::cout << "wrote bundle with " << b.slices.size() << " slices to " << outp.string() << "\n";
  return 0;
}

template <Field F>
int cmd_reconstruct(const Options& opt) {
  auto t0 = Clock::now();
  IoContext<F> ctx;
  SliceBundle<F> b = ctx.bundle(opt.bundle_path);
  Reconstruction<F> rec = reconstruct(b);

  json rep = report_envelope(opt, "reconstruct");
  rep["inputs"] = {{"bundle", opt.bundle_path}, {"digest", file_digest(opt.bundle_path)}};
  {
    json sd = json::array();
    json bdoc = load_json_file(opt.bundle_path);
    for (const auto& s : bdoc.at("slices")) {
      fs::path sp = fs::path(opt.bundle_path).parent_path() / s.get<std::string>();
      sd.push_back({{"path", s.get<std::string>()}, {"digest", file_digest(sp)}});
    }
    rep["inputs"]["slices"] = std::move(sd);
  }
  rep["method"] = rec.method;
  rep["dims"] = dims_json(rec.module);
  rep["total_dim"] = rec.module.total_dim();
  rep["consistent"] = rec.consistent;
  json checks = json::array();
  json witnesses = json::array();
  for (std::size_t t = 0; t < rec.slice_checks.size(); ++t) {
    const IsoResult<F>& r = rec.slice_checks[t];
    checks.push_back({{"slice", t},
                      {"verdict", r.yes() ? "yes" : (r.no() ? "no" : "inconclusive")},
                      {"reason", r.reason}});
    if (r.yes() && r.witness.has_value()) {
      json blocks = json::array();
      for (const auto& blk : r.witness->blocks) blocks.push_back(matrix_to_json(blk));
      witnesses.push_back({{"slice", t}, {"blocks", std::move(blocks)}});
    }
  }
  rep["slice_checks"] = std::move(checks);
  rep["isomorphism_witnesses"] = std::move(witnesses);
  {
    PsiMap<F> psi = psi_map(rec.module, b.cov);
    PhiMap<F> phi = phi_map(rec.module, b.cov);
    rep["ranks"] = {{"psi_rank", rank(psi.hom.total(psi.dom.module, rec.module))},
                    {"module_dim", rec.module.total_dim()},
                    {"phi_kernel", static_cast<int>(kernel_basis(phi.hom.total(rec.module, phi.cod.module)).size())}};
  }
  if (!opt.module_out.empty()) {
    fs::path mop = opt.module_out;
    fs::path dir = mop.parent_path().empty() ? fs::path(".") : mop.parent_path();
    fs::path apath = fs::path(opt.bundle_path).parent_path() /
                     load_json_file(opt.bundle_path).at("algebra_ref").get<std::string>();
    fs::path algrel = fs::relative(fs::weakly_canonical(apath), fs::weakly_canonical(dir));
    write_text_file(mop, dump_report(module_to_json(rec.module, algrel.string())));
    rep["module_out"] = mop.string();
  }
  emit(opt, rep, t0);
  std::cout << "reconstruction (" << rec.method << "): total dim " << rec.module.total_dim()
            << (rec.consistent ? ", consistent" : ", NOT consistent") << "\n";
  if (!rec.consistent) {
    std::cerr << dump_report(json{{"error", {{"kind", "consistency"},
                                             {"message", "re-sliced module does not match the bundle"}}}});
    return 3;
  }
  return 0;
}

template <Field F>
int cmd_hilb(const Options& opt) {
  auto t0 = Clock::now();
  IsotypeVector n = parse_isotype(opt.n_spec);
  require(static_cast<int>(n.size()) == opt.m, "parse",
          "isotype vector needs exactly m = " + std::to_string(opt.m) + " entries");
  long total = 0;
  for (long k : n) total += k;
  int level = opt.truncation >= 1 ? opt.truncation : static_cast<int>(std::max<long>(total, 1));
  auto alg = mckay_algebra<F>(opt.m, level);
  Covering cov = opt.covering.empty() ? singleton_covering(*alg) : covering_from_string(*alg, opt.covering);
  HilbReport<F> rep = hilb_injectivity_experiment<F>(opt.m, n, cov, level);

  json out = report_envelope(opt, "hilb");
  out["config"] = {{"m", opt.m},
                   {"n", n},
                   {"covering", covering_to_json(*alg, cov)},
                   {"truncation_level", level}};
  out["fixed_points"] = json::array();
  for (const Partition& p : rep.points) out["fixed_points"].push_back(p.str());
  out["pair_count"] = rep.pairs.size();
  out["pairs"] = json::array();
  for (const auto& pr : rep.pairs)
    out["pairs"].push_back({{"i", pr.i},
                            {"j", pr.j},
                            {"isomorphic", pr.isomorphic},
                            {"distinguished", pr.distinguished},
                            {"witness_slice", pr.witness_slice}});
  out["all_distinguished"] = rep.all_ok;
  json artifacts = json::array();
  if (!rep.all_ok && !opt.out.empty()) {
    int k = 0;
    for (const auto& pr : rep.pairs) {
      if (pr.distinguished && !pr.isomorphic && !pr.counterexample) continue;
      fs::path ap = fs::path(opt.out).parent_path() /
                    (fs::path(opt.out).stem().string() + ".counterexample" + std::to_string(k++) + ".json");
      json art;
      art["pair"] = {{"i", pr.i}, {"j", pr.j}};
      art["partitions"] = {rep.points[static_cast<std::size_t>(pr.i)].str(),
                           rep.points[static_cast<std::size_t>(pr.j)].str()};
      art["covering"] = covering_to_json(*alg, cov);
      art["algebra"] = mckay_spec_json<F>(opt.m, level);
      art["modules"] = {module_to_json(rep.modules[static_cast<std::size_t>(pr.i)], "inline"),
                       module_to_json(rep.modules[static_cast<std::size_t>(pr.j)], "inline")};
      write_text_file(ap, dump_report(art));
      artifacts.push_back(ap.string());
    }
  }
  out["counterexample_artifacts"] = std::move(artifacts);
  emit(opt, out, t0);
  std::cout << rep.points.size() << " fixed points, " << rep.pairs.size() << " pairs, "
            << (rep.all_ok ? "all distinguished" : "SEPARATION FAILED") << "\n";
  if (!rep.all_ok) {
    std::cerr << dump_report(json{{"error", {{"kind", "counterexample"},
                                             {"message", "a fixed-point pair was not separated"}}}});
    return 3;
  }
  return 0;
}

// Seeded property suites over the shipped algebras.
template <Field F>
int cmd_check(const Options& opt) {
  auto t0 = Clock::now();
  json rep = report_envelope(opt, "check");
  json suites = json::array();
  bool all_ok = true;
  auto run_suite = [&](const std::string& name, int cases, const std::function<void(int)>& body) {
    int failures = 0;
    std::string first_error;
    for (int c = 0; c < cases; ++c) {
      try {
        body(c);
      } catch (const std::exception& e) {
        ++failures;
        if (first_error.empty()) first_error = e.what();
      }
    }
    suites.push_back({{"suite", name}, {"cases", cases}, {"failures", failures}, {"first_error", first_error}});
    all_ok = all_ok && failures == 0;
    std::cout << (failures == 0 ? "[ok]   " : "[FAIL] ") << name << " (" << cases << " cases)\n";
  };

  std::vector<std::shared_ptr<const FDAlgebra<F>>> algebras;
  algebras.push_back(truncated_algebra<F>(Quiver({"0", "1", "2"}, "0", {{"a", 0, 1}, {"b", 0, 2}}), {}, 1));
  algebras.push_back(truncated_algebra<F>(Quiver({"0"}, "0", {{"x", 0, 0}}), {}, 3));
  algebras.push_back(mckay_algebra<F>(2, 3));
  auto singleton_sets = [&](const FDAlgebra<F>& a) {
    std::vector<std::vector<int>> sets;
    for (int v = 0; v < a.vertex_count(); ++v)
      if (v != a.source) sets.push_back({a.source, v});
    if (sets.empty()) sets.push_back({a.source});
    return sets;
  };

  run_suite("exactla.rref", 20, [&](int c) {
    Rng rng(opt.seed * 1000 + static_cast<std::uint64_t>(c));
    int r = rng.uniform(1, 5), co = rng.uniform(1, 5);
    Matrix<F> m(r, co);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < co; ++j) m.at(i, j) = F(rng.uniform(-3, 3));
    RrefResult<F> rr = rref(m);
    require(rref(rr.mat).mat == rr.mat, "check", "rref not idempotent");
    require(rank(m) + static_cast<int>(kernel_basis(m).size()) == co, "check", "rank-nullity failed");
  });

  run_suite("fdmod.random_validate", static_cast<int>(algebras.size()) * 6, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 2000 + static_cast<std::uint64_t>(c));
    FDModule<F> m = random_module(alg, rng);
    m.validate();
  });

  run_suite("recollement.nu_factorization", static_cast<int>(algebras.size()) * 4, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 3000 + static_cast<std::uint64_t>(c));
    FDModule<F> f = random_module(alg, rng);
    std::vector<int> verts{alg->source};
    for (int v = 0; v < alg->vertex_count(); ++v)
      if (v != alg->source && rng.uniform(0, 1)) verts.push_back(v);
    Cornered<F> corn = corner_algebra(alg, verts);
    FDModule<F> n = restrict_module(corn, f);
    Induced<F> ind = induce(corn, n);
    Coinduced<F> cod = coinduce(corn, n);
    ModuleHom<F> nu = nu_map(ind, cod);
    ModuleHom<F> comp = hom_compose(unit_star(cod, f), counit_shriek(ind, f));
    for (std::size_t v = 0; v < nu.blocks.size(); ++v)
      require(nu.blocks[v] == comp.blocks[v], "check", "nu is not unit after counit");
  });

  run_suite("recollement.prop32_ranks", static_cast<int>(algebras.size()) * 4, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 4000 + static_cast<std::uint64_t>(c));
    FDModule<F> f = random_module(alg, rng);
    Covering cov = make_covering(*alg, singleton_sets(*alg));
    PsiMap<F> psi = psi_map(f, cov);
    require(rank(psi.hom.total(psi.dom.module, f)) == f.total_dim(), "check", "psi is not surjective");
    PhiMap<F> phi = phi_map(f, cov);
    require(kernel_basis(phi.hom.total(f, phi.cod.module)).empty(), "check", "phi has a kernel");
  });

  run_suite("fdmod.iso_reflexive", static_cast<int>(algebras.size()) * 2, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 6000 + static_cast<std::uint64_t>(c));
    FDModule<F> m = random_module(alg, rng);
    IsoResult<F> r = is_isomorphic(m, m);
    require(r.yes(), "check", "module is not isomorphic to itself");
    require(r.witness.has_value() && is_module_hom(m, m, *r.witness), "check", "bad reflexivity witness");
  });

  run_suite("fdmod.image_corestriction", static_cast<int>(algebras.size()) * 2, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 6500 + static_cast<std::uint64_t>(c));
    FDModule<F> m = random_module(alg, rng);
    FDModule<F> n = random_module(alg, rng);
    std::vector<ModuleHom<F>> homs = hom_space(m, n);
    if (homs.empty()) return;
    ImageModule<F> im = image_module(m, n, homs.front());
    im.module.validate();
    for (std::size_t v = 0; v < im.corestriction.blocks.size(); ++v)
      require(rank(im.corestriction.blocks[v]) == im.module.dims[v], "check",
              "corestriction is not surjective onto the image");
  });

  run_suite("recollement.adjunction_triangles", static_cast<int>(algebras.size()) * 2, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 7000 + static_cast<std::uint64_t>(c));
    FDModule<F> f = random_module(alg, rng);
    Cornered<F> corn = corner_algebra(alg, singleton_sets(*alg).front());
    FDModule<F> n = restrict_module(corn, f);
    auto id_ok = [](const ModuleHom<F>& h) {
      for (const auto& blk : h.blocks)
        if (!blk.is_identity()) return false;
      return true;
    };
    Induced<F> ind = induce(corn, n);
    FDModule<F> n2 = restrict_module(corn, ind.module);
    Induced<F> ind2 = induce(corn, n2);
    ModuleHom<F> eta = unit_shriek(ind);
    require(id_ok(hom_compose(counit_shriek(ind2, ind.module), induce_hom(ind, ind2, eta))), "check",
            "left adjunction triangle fails");
    require(id_ok(hom_compose(restrict_hom(corn, counit_shriek(ind, f)), eta)), "check",
            "restricted left triangle fails");
    Coinduced<F> cod = coinduce(corn, n);
    require(id_ok(hom_compose(counit_star(cod), restrict_hom(corn, unit_star(cod, f)))), "check",
            "restricted right triangle fails");
    FDModule<F> n3 = restrict_module(corn, cod.module);
    Coinduced<F> cod2 = coinduce(corn, n3);
    require(id_ok(hom_compose(coinduce_hom(cod2, cod, counit_star(cod)), unit_star(cod2, cod.module))), "check",
            "right adjunction triangle fails");
  });

  run_suite("recollement.nu_naturality", static_cast<int>(algebras.size()) * 2, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 7500 + static_cast<std::uint64_t>(c));
    Cornered<F> corn = corner_algebra(alg, singleton_sets(*alg).front());
    FDModule<F> n1 = restrict_module(corn, random_module(alg, rng));
    FDModule<F> n2 = restrict_module(corn, random_module(alg, rng));
    std::vector<ModuleHom<F>> homs = hom_space(n1, n2);
    if (homs.empty()) return;
    Induced<F> i1 = induce(corn, n1), i2 = induce(corn, n2);
    Coinduced<F> c1 = coinduce(corn, n1), c2 = coinduce(corn, n2);
    ModuleHom<F> nu1 = nu_map(i1, c1), nu2 = nu_map(i2, c2);
    const ModuleHom<F>& h = homs[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(homs.size()) - 1))];
    ModuleHom<F> lhs = hom_compose(coinduce_hom(c1, c2, h), nu1);
    ModuleHom<F> rhs = hom_compose(nu2, induce_hom(i1, i2, h));
    for (std::size_t v = 0; v < lhs.blocks.size(); ++v)
      require(lhs.blocks[v] == rhs.blocks[v], "check", "naturality square broken");
  });

  run_suite("recollement.phi_psi_image", static_cast<int>(algebras.size()) * 2, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 8000 + static_cast<std::uint64_t>(c));
    FDModule<F> f = random_module(alg, rng);
    Covering cov = make_covering(*alg, singleton_sets(*alg));
    PsiMap<F> psi = psi_map(f, cov);
    PhiMap<F> phi = phi_map(f, cov);
    ModuleHom<F> comp = hom_compose(phi.hom, psi.hom);
    ImageModule<F> im = image_module(psi.dom.module, phi.cod.module, comp);
    ImageModule<F> imphi = image_module(f, phi.cod.module, phi.hom);
    require(im.module.dims == imphi.module.dims, "check", "im(phi o psi) has the wrong dimensions");
    for (std::size_t v = 0; v < im.inclusion.blocks.size(); ++v)
      require(subspace_equal(column_basis_of(im.inclusion.blocks[v]).rows, column_basis_of(imphi.inclusion.blocks[v]).rows),
              "check", "im(phi o psi) differs from phi(F)");
    for (std::size_t v = 0; v < imphi.corestriction.blocks.size(); ++v) {
      const Matrix<F>& blk = imphi.corestriction.blocks[v];
      require(blk.rows() == blk.cols() && rank(blk) == blk.rows(), "check",
              "phi does not embed F onto the image");
    }
  });

  run_suite("recollement.splitting", static_cast<int>(algebras.size()), [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c)];
    Covering cov = make_covering(*alg, singleton_sets(*alg));
    for (SplitStyle st : {SplitStyle::Assign, SplitStyle::Average}) {
      Splitting<F> sp = splitting_p(alg, cov, st);
      require(sp.psi_after_p.is_identity(), "check", "Psi after P is not the identity");
      require(sp.right_module_ok, "check", "P is not a right module map");
    }
  });

  run_suite("recollement.roundtrip", static_cast<int>(algebras.size()) * 4, [&](int c) {
    auto alg = algebras[static_cast<std::size_t>(c) % algebras.size()];
    Rng rng(opt.seed * 5000 + static_cast<std::uint64_t>(c));
    FDModule<F> f = random_source_quotient(alg, rng);
    if (!is_zero_generated(f) || f.dims[static_cast<std::size_t>(alg->source)] != 1) return;
    Covering cov = make_covering(*alg, singleton_sets(*alg));
    Reconstruction<F> rec = reconstruct(slice(f, cov));
    require(rec.consistent, "check", "round trip inconsistent");
    require(is_isomorphic(rec.module, f).yes(), "check", "round trip lost the module");
  });

  rep["suites"] = std::move(suites);
  rep["ok"] = all_ok;
  emit(opt, rep, t0);
  std::cout << (all_ok ? "all property suites passed\n" : "property suite FAILURES\n");
  return all_ok ? 0 : 3;
}

template <class Fn>
int dispatch_field(const std::string& field, Fn&& fn) {
  if (field == "rational") return fn.template operator()<Rational>();
  if (field.rfind("prime:", 0) == 0) {
    std::uint64_t p = 0;
    try {
      p = std::stoull(field.substr(6));
    } catch (const std::exception&) {
      fail("parse", "bad prime in --field '" + field + "'");
    }
    Fp::set_modulus(p);
    return fn.template operator()<Fp>();
  }
  fail("parse", "unknown field '" + field + "' (use rational or prime:p)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corner - exact cornering calculus for quiver algebra modules"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--field", opt.field, "scalar field: rational | prime:p")->capture_default_str();
  app.add_option("--seed", opt.seed, "seed for randomized suites")->capture_default_str();
  app.add_flag("--timings", opt.timings, "include wall-clock timings in reports");

  auto* algebra = app.add_subcommand("algebra", "build and inspect algebras");
  algebra->require_subcommand(1);
  auto* ab = algebra->add_subcommand("build", "construct the algebra of a document");
  ab->add_option("--spec", opt.spec, "algebra document")->required();
  ab->add_option("--out", opt.out, "report path");
  auto* ai = algebra->add_subcommand("inspect", "construct and list the basis");
  ai->add_option("--spec", opt.spec, "algebra document")->required();
  ai->add_option("--out", opt.out, "report path");
  auto* am = algebra->add_subcommand("mckay", "emit a framed McKay algebra document");
  am->add_option("--m", opt.m, "cyclic group order")->required();
  am->add_option("--truncation", opt.truncation, "truncation level")->required();
  am->add_option("--out", opt.out, "output document path")->required();

  auto* module = app.add_subcommand("module", "validate and inspect modules");
  module->require_subcommand(1);
  auto* mv = module->add_subcommand("validate", "validate a module document");
  mv->add_option("--module", opt.module_path, "module document")->required();
  mv->add_option("--out", opt.out, "report path");
  auto* mi = module->add_subcommand("info", "validate and summarize a module document");
  mi->add_option("--module", opt.module_path, "module document")->required();
  mi->add_option("--out", opt.out, "report path");

  auto* sl = app.add_subcommand("slice", "slice a module over a covering");
  sl->add_option("--module", opt.module_path, "module document")->required();
  sl->add_option("--covering", opt.covering, "covering, e.g. \"0|1,2\"")->required();
  sl->add_option("--out", opt.out, "bundle path")->required();

  auto* rc = app.add_subcommand("reconstruct", "reconstruct a module from a bundle");
  rc->add_option("--bundle", opt.bundle_path, "bundle document")->required();
  rc->add_option("--out", opt.out, "report path");
  rc->add_option("--module-out", opt.module_out, "write the reconstructed module here");

  auto* ck = app.add_subcommand("check", "run the seeded property suites");
  ck->add_option("--out", opt.out, "report path");

  auto* hb = app.add_subcommand("hilb", "orbifold fixed-point separation experiment");
  hb->add_option("--m", opt.m, "cyclic group order")->required();
  hb->add_option("--n", opt.n_spec, "isotype vector, e.g. \"1,1\"")->required();
  hb->add_option("--covering", opt.covering, "covering (default: all singleton corner sets)");
  hb->add_option("--truncation", opt.truncation, "truncation level (default: total dimension)");
  hb->add_option("--out", opt.out, "report path");

  for (CLI::App* sub : {algebra, module, sl, rc, ck, hb, ab, ai, am, mv, mi}) sub->fallthrough();
  CLI11_PARSE(app, argc, argv);

  try {
    return dispatch_field(opt.field, [&]<Field F>() -> int {
      if (ab->parsed()) return cmd_algebra_build<F>(opt, false);
      if (ai->parsed()) return cmd_algebra_build<F>(opt, true);
      if (am->parsed()) return cmd_algebra_mckay<F>(opt);
      if (mv->parsed()) return cmd_module<F>(opt, false);
      if (mi->parsed()) return cmd_module<F>(opt, true);
      if (sl->parsed()) return cmd_slice<F>(opt);
      if (rc->parsed()) return cmd_reconstruct<F>(opt);
      if (ck->parsed()) return cmd_check<F>(opt);
      if (hb->parsed()) return cmd_hilb<F>(opt);
      fail("parse", "no subcommand");
    });
  } catch (const Error& e) {
    std::cerr << dump_report(error_to_json(e));
    return 2;
  } catch (const std::exception& e) {
    std::cerr << dump_report(json{{"error", {{"kind", "internal"}, {"message", e.what()}}}});
    return 1;
  }
}
