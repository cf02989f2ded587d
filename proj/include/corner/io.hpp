#pragma once
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corner/recollement.hpp"

namespace corner {

using json = nlohmann::json;

inline json load_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  require(in.good(), "parse", "cannot open '" + p.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte offset in what()
    fail("parse", "in '" + p.string() + "': " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  require(out.good(), "parse", "cannot write '" + p.string() + "'");
  out << text;
}

inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

inline std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

inline std::string file_digest(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(in.good(), "parse", "cannot open '" + p.string() + "' for digest");
  std::ostringstream os;
  os << in.rdbuf();
  return "fnv1a64:" + fnv1a64_hex(os.str());
}

inline json error_to_json(const Error& e) {
  return json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
}

// ---------------------------------------------------------------------------
// Scalars and matrices: entries are strings "p/q" (or "n" for integers);
// plain JSON integers are accepted on input.

template <Field F>
F scalar_from_json(const json& j) {
  if (j.is_number_integer()) return F(j.get<long>());
  require(j.is_string(), "parse", "scalar entries must be strings or integers");
  return F::parse(j.get<std::string>());
}

template <Field F>
json matrix_to_json(const Matrix<F>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Field F>
Matrix<F> matrix_from_json(const json& j, const std::string& what) {
  require(j.is_array(), "parse", what + ": matrix must be an array of rows");
  int rows = static_cast<int>(j.size());
  int cols = rows == 0 ? 0 : static_cast<int>(j.at(0).size());
  Matrix<F> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    require(j.at(static_cast<std::size_t>(i)).is_array() && static_cast<int>(j.at(static_cast<std::size_t>(i)).size()) == cols,
            "parse", what + ": ragged matrix");
    for (int c = 0; c < cols; ++c) m.at(i, c) = scalar_from_json<F>(j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Arrow words are serialized leftmost-applied-last, matching the right-to-left
// composition convention; internally words are stored in application order.

inline json word_to_json(const Quiver& q, const PathWord& w) {
  json out = json::array();
  for (auto it = w.arrows.rbegin(); it != w.arrows.rend(); ++it) out.push_back(q.arrow(*it).id);
  return out;
}

inline PathWord word_from_json(const Quiver& q, const json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), "parse", what + ": relation term needs a nonempty arrow word");
  std::vector<int> applied;
  for (auto it = j.rbegin(); it != j.rend(); ++it) {
    require(it->is_string(), "parse", what + ": arrow ids must be strings");
    applied.push_back(q.arrow_index(it->get<std::string>()));
  }
  return PathWord::of_arrows(q, applied);
}

// ---------------------------------------------------------------------------
// Algebra documents: {vertices, source, arrows, relations, truncation_level}.

template <Field F>
struct AlgebraSpec {
  Quiver quiver;
  std::vector<RelationElement<F>> relations;
  int level = 1;
};

template <Field F>
AlgebraSpec<F> algebra_spec_from_json(const json& j) {
  require(j.is_object(), "parse", "algebra document must be an object");
  for (const char* k : {"vertices", "source", "arrows", "truncation_level"})
    require(j.contains(k), "parse", std::string("algebra document misses field '") + k + "'");
  std::vector<std::string> names;
  for (const auto& v : j.at("vertices")) names.push_back(v.get<std::string>());
  std::vector<Arrow> arrows;
  for (const auto& a : j.at("arrows")) {
    require(a.contains("id") && a.contains("tail") && a.contains("head"), "parse",
            "arrow entries need id/tail/head");
    arrows.push_back(Arrow{a.at("id").get<std::string>(), -1, -1});
  }
  Quiver q;
  {
    // resolve arrow endpoints against the vertex list
    std::vector<Arrow> resolved;
    Quiver probe(names, j.at("source").get<std::string>(), {});
    std::size_t idx = 0;
    for (const auto& a : j.at("arrows")) {
      Arrow ar = arrows[idx++];
      ar.tail = probe.vertex_index(a.at("tail").get<std::string>());
      ar.head = probe.vertex_index(a.at("head").get<std::string>());
      resolved.push_back(std::move(ar));
    }
    q = Quiver(names, j.at("source").get<std::string>(), std::move(resolved));
  }
  AlgebraSpec<F> spec{q, {}, j.at("truncation_level").get<int>()};
  if (j.contains("relations")) {
    for (const auto& rel : j.at("relations")) {
      std::vector<RelationTerm<F>> terms;
      for (const auto& t : rel) {
        require(t.is_array() && t.size() == 2, "parse", "relation terms are [coeff, [arrow ids]] pairs");
        terms.push_back({scalar_from_json<F>(t.at(0)), word_from_json(spec.quiver, t.at(1), "relation")});
      }
      spec.relations.push_back(RelationElement<F>::make(spec.quiver, std::move(terms)));
    }
  }
  return spec;
}

template <Field F>
json algebra_spec_to_json(const Quiver& q, const std::vector<RelationElement<F>>& rels, int level) {
  json j;
  j["schema"] = "corner-algebra/1";
  j["vertices"] = json::array();
  for (int v = 0; v < q.vertex_count(); ++v) j["vertices"].push_back(q.vertex_name(v));
  j["source"] = q.vertex_name(q.source());
  j["arrows"] = json::array();
  for (const Arrow& a : q.arrows())
    j["arrows"].push_back({{"id", a.id}, {"tail", q.vertex_name(a.tail)}, {"head", q.vertex_name(a.head)}});
  j["relations"] = json::array();
  for (const auto& rel : rels) {
    json terms = json::array();
    for (const auto& t : rel.terms) terms.push_back(json::array({t.coeff.str(), word_to_json(q, t.word)}));
    j["relations"].push_back(std::move(terms));
  }
  j["truncation_level"] = level;
  return j;
}

/// Document for the framed McKay algebra of Z/m with the returning framing
/// arrow killed.
template <Field F>
json mckay_spec_json(int m, int level) {
  DoubledQuiver dq = framed_mckay_quiver(m);
  auto rels = kill_arrows(dq.q, preprojective_relations<F>(dq, default_signs(dq)), {"b*"});
  return algebra_spec_to_json<F>(dq.q, rels, level);
}

// ---------------------------------------------------------------------------
// Module documents. Arrow-presented modules carry {algebra_ref, dims,
// arrows}; cornered slices carry per-basis action matrices instead, keyed by
// the rebuilt corner basis and cross-checked against its representative
// paths.

template <Field F>
json module_to_json(const FDModule<F>& m, const std::string& algebra_ref) {
  require(m.alg->quiver.has_value(), "reference", "module serialization needs an arrow-presented algebra");
  const Quiver& q = *m.alg->quiver;
  json j;
  j["schema"] = "corner-module/1";
  j["algebra_ref"] = algebra_ref;
  j["dims"] = json::object();
  for (int v = 0; v < m.alg->vertex_count(); ++v)
    j["dims"][m.alg->vertex_names[static_cast<std::size_t>(v)]] = m.dims[static_cast<std::size_t>(v)];
  j["arrows"] = json::object();
  for (int a = 0; a < q.arrow_count(); ++a) {
    Matrix<F> total = m.act_of(m.alg->arrow_class[static_cast<std::size_t>(a)]);
    Matrix<F> blk = total.block(m.offset(q.arrow(a).head), m.offset(q.arrow(a).tail),
                                m.dims[static_cast<std::size_t>(q.arrow(a).head)],
                                m.dims[static_cast<std::size_t>(q.arrow(a).tail)]);
    if (!blk.is_zero()) j["arrows"][q.arrow(a).id] = matrix_to_json(blk);
  }
  return j;
}

template <Field F>
json corner_module_to_json(const Cornered<F>& c, const FDModule<F>& m, const std::string& algebra_ref) {
  require(m.alg == c.algebra, "reference", "slice serialization: module is not over this corner");
  const Quiver& q = *c.parent->quiver;
  json j;
  j["schema"] = "corner-module/1";
  j["algebra_ref"] = algebra_ref;
  j["corner"] = json::array();
  for (int v : c.verts) j["corner"].push_back(c.parent->vertex_names[static_cast<std::size_t>(v)]);
  j["dims"] = json::object();
  for (std::size_t vc = 0; vc < c.verts.size(); ++vc)
    j["dims"][c.algebra->vertex_names[vc]] = m.dims[vc];
  j["basis_paths"] = json::array();
  j["actions"] = json::array();
  for (int b = 0; b < c.algebra->dim(); ++b) {
    j["basis_paths"].push_back(word_to_json(q, c.algebra->basis[static_cast<std::size_t>(b)].rep));
    j["actions"].push_back(matrix_to_json(m.act[static_cast<std::size_t>(b)]));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Loading with a context, so every document referring to the same algebra
// file shares one in-memory instance (module operations require pointer
// equality of algebras).

template <Field F>
struct LoadedModule {
  FDModule<F> module;
  std::optional<Cornered<F>> corner;
  std::filesystem::path algebra_path;
};

template <Field F>
class IoContext {
 public:
  std::shared_ptr<const FDAlgebra<F>> algebra(const std::filesystem::path& p) {
    std::string key = std::filesystem::weakly_canonical(p).string();
    auto it = algebras_.find(key);
    if (it != algebras_.end()) return it->second;
    AlgebraSpec<F> spec = algebra_spec_from_json<F>(load_json_file(p));
    auto alg = truncated_algebra(spec.quiver, std::move(spec.relations), spec.level);
    algebras_.emplace(key, alg);
    return alg;
  }

  Cornered<F> corner(const std::filesystem::path& algebra_path, std::vector<int> verts) {
    std::string key = std::filesystem::weakly_canonical(algebra_path).string();
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto ck = std::make_pair(key, verts);
    auto it = corners_.find(ck);
    if (it != corners_.end()) return it->second;
    Cornered<F> c = corner_algebra(algebra(algebra_path), verts);
    corners_.emplace(ck, c);
    return c;
  }

  LoadedModule<F> module(const std::filesystem::path& p) {
    json j = load_json_file(p);
    require(j.is_object() && j.contains("algebra_ref") && j.contains("dims"), "parse",
            "module document needs algebra_ref and dims");
    std::filesystem::path apath = p.parent_path() / j.at("algebra_ref").get<std::string>();
    auto alg = algebra(apath);
    LoadedModule<F> out;
    out.algebra_path = apath;
    if (j.contains("corner")) {
      std::vector<int> verts;
      for (const auto& name : j.at("corner")) verts.push_back(resolve_vertex(*alg, name.get<std::string>()));
      Cornered<F> c = corner(apath, verts);
      std::vector<int> dims = read_dims(*c.algebra, j.at("dims"));
      require(j.contains("actions") && j.contains("basis_paths"), "parse",
              "cornered module document needs actions and basis_paths");
      const json& bp = j.at("basis_paths");
      require(static_cast<int>(bp.size()) == c.algebra->dim(), "reference",
              "mismatched references: slice basis count differs from the rebuilt corner algebra");
      for (int b = 0; b < c.algebra->dim(); ++b)
        require(bp.at(static_cast<std::size_t>(b)) == word_to_json(*c.parent->quiver, c.algebra->basis[static_cast<std::size_t>(b)].rep),
                "reference", "mismatched references: slice basis path differs from the rebuilt corner algebra");
      FDModule<F> m;
      m.alg = c.algebra;
      m.dims = dims;
      const json& acts = j.at("actions");
      require(static_cast<int>(acts.size()) == c.algebra->dim(), "parse", "one action matrix per basis element");
      for (int b = 0; b < c.algebra->dim(); ++b)
        m.act.push_back(matrix_from_json<F>(acts.at(static_cast<std::size_t>(b)), "action"));
      m.validate();
      out.module = std::move(m);
      out.corner = std::move(c);
      return out;
    }
    std::vector<int> dims = read_dims(*alg, j.at("dims"));
    std::map<std::string, Matrix<F>> arrows;
    if (j.contains("arrows"))
      for (const auto& [id, mat] : j.at("arrows").items()) arrows.emplace(id, matrix_from_json<F>(mat, "arrow '" + id + "'"));
    out.module = module_from_arrows(alg, std::move(dims), arrows);
    return out;
  }

  SliceBundle<F> bundle(const std::filesystem::path& p) {
    json j = load_json_file(p);
    for (const char* k : {"algebra_ref", "covering", "slices", "provenance"})
      require(j.contains(k), "parse", std::string("bundle document misses field '") + k + "'");
    std::filesystem::path apath = p.parent_path() / j.at("algebra_ref").get<std::string>();
    auto alg = algebra(apath);
    SliceBundle<F> b;
    std::vector<std::vector<int>> sets;
    for (const auto& set : j.at("covering")) {
      std::vector<int> verts;
      for (const auto& name : set) verts.push_back(resolve_vertex(*alg, name.get<std::string>()));
      sets.push_back(std::move(verts));
    }
    b.cov = make_covering(*alg, sets);
    std::string prov = j.at("provenance").get<std::string>();
    require(prov == "sliced-from-module" || prov == "external", "parse",
            "provenance must be sliced-from-module or external");
    b.prov = prov == "sliced-from-module" ? Provenance::FromModule : Provenance::External;
    require(j.at("slices").size() == b.cov.sets.size(), "parse", "one slice per covering set");
    for (std::size_t t = 0; t < b.cov.sets.size(); ++t) {
      std::filesystem::path sp = p.parent_path() / j.at("slices").at(t).get<std::string>();
      LoadedModule<F> lm = module(sp);
      require(lm.corner.has_value(), "reference", "bundle slices must be cornered modules");
      require(std::filesystem::weakly_canonical(lm.algebra_path) == std::filesystem::weakly_canonical(apath),
              "reference", "mismatched references: slice refers to a different algebra file");
      require(lm.corner->verts == b.cov.sets[t].verts, "reference",
              "mismatched references: slice corner differs from the covering set");
      b.corners.push_back(*lm.corner);
      b.slices.push_back(std::move(lm.module));
    }
    return b;
  }

  static int resolve_vertex(const FDAlgebra<F>& a, const std::string& name) {
    for (int v = 0; v < a.vertex_count(); ++v)
      if (a.vertex_names[static_cast<std::size_t>(v)] == name) return v;
    fail("reference", "unknown vertex '" + name + "'");
  }

 private:
  static std::vector<int> read_dims(const FDAlgebra<F>& a, const json& j) {
    require(j.is_object(), "parse", "dims must map vertex names to sizes");
    std::vector<int> dims(static_cast<std::size_t>(a.vertex_count()), 0);
    for (const auto& [name, d] : j.items()) {
      int v = resolve_vertex(a, name);
      dims[static_cast<std::size_t>(v)] = d.template get<int>();
    }
    return dims;
  }

  std::map<std::string, std::shared_ptr<const FDAlgebra<F>>> algebras_;
  std::map<std::pair<std::string, std::vector<int>>, Cornered<F>> corners_;
};

// ---------------------------------------------------------------------------
// Covering strings: corner sets separated by '|', vertices by ','. The
// infinity glyph (or the name of the distinguished vertex) may be glued in
// front of a set; the distinguished vertex is implicit when omitted.

inline std::vector<std::vector<std::string>> parse_covering_tokens(const std::string& s) {
  std::vector<std::vector<std::string>> out;
  std::string rest = s;
  auto trim = [](std::string t) {
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
    return t;
  };
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    std::size_t bar = rest.find('|', pos);
    std::string part = rest.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos);
    std::vector<std::string> set;
    std::size_t q = 0;
    while (q <= part.size()) {
      std::size_t comma = part.find(',', q);
      std::string tok = trim(part.substr(q, comma == std::string::npos ? std::string::npos : comma - q));
      if (!tok.empty()) set.push_back(tok);
      if (comma == std::string::npos) break;
      q = comma + 1;
    }
    require(!set.empty(), "parse", "empty corner set in covering '" + s + "'");
    out.push_back(std::move(set));
    if (bar == std::string::npos) break;
    pos = bar + 1;
  }
  require(!out.empty(), "parse", "empty covering string");
  return out;
}

template <Field F>
Covering covering_from_string(const FDAlgebra<F>& a, const std::string& s) {
  static const std::string infinity = "\xE2\x88\x9E";  // UTF-8 for the infinity sign
  std::vector<std::vector<int>> sets;
  for (const auto& tokens : parse_covering_tokens(s)) {
    std::vector<int> verts{a.source};
    for (std::string tok : tokens) {
      if (tok.rfind(infinity, 0) == 0) {
        tok = tok.substr(infinity.size());
        if (tok.empty()) continue;  // the glyph alone names the distinguished vertex
      }
      bool named = false;
      for (int v = 0; v < a.vertex_count() && !named; ++v)
        if (a.vertex_names[static_cast<std::size_t>(v)] == tok) {
          verts.push_back(v);
          named = true;
        }
      if (!named && tok == "inf") {
        verts.push_back(a.source);
        named = true;
      }
      require(named, "reference", "unknown vertex '" + tok + "' in covering");
    }
    sets.push_back(std::move(verts));
  }
  return make_covering(a, std::move(sets));
}

template <Field F>
json covering_to_json(const FDAlgebra<F>& a, const Covering& cov) {
  json out = json::array();
  for (const CornerSet& s : cov.sets) {
    json set = json::array();
    for (int v : s.verts) set.push_back(a.vertex_names[static_cast<std::size_t>(v)]);
    out.push_back(std::move(set));
  }
  return out;
}

}  // namespace corner
