#include "motcalc/cli.hpp"

#include "motcalc/errors.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace motcalc::cli {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

const std::string kTimes = "×";

std::vector<std::string> split_product(const std::string& label) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t pos; (pos = label.find(kTimes, start)) != std::string::npos; start = pos + kTimes.size())
    parts.push_back(label.substr(start, pos - start));
  parts.push_back(label.substr(start));
  return parts;
}

std::optional<int> builtin_space(const std::string& label, char letter) {
  if (label.size() < 2 || label[0] != letter) return std::nullopt;
  for (std::size_t i = 1; i < label.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(label[i]))) return std::nullopt;
  return std::stoi(label.substr(1));
}

std::string vector_string(const std::vector<Integer>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + ")";
}

// Line numbers of top-level sections and of the elements of array-valued
// sections, found by a light scan of the raw text.
struct LineIndex {
  std::map<std::string, int> section;
  std::map<std::string, std::vector<int>> elements;

  static LineIndex scan(std::string_view text) {
    LineIndex idx;
    int line = 1;
    std::vector<char> stack;
    std::string last_string;
    std::string key;
    bool expecting = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char ch = text[i];
      if (ch == '\n') {
        ++line;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      const bool element_start = expecting && stack.size() == 2 && stack[1] == '[' && ch != ']';
      if (element_start) {
        idx.elements[key].push_back(line);
        expecting = false;
      }
      if (ch == '"') {
        std::string s;
        for (++i; i < text.size() && text[i] != '"'; ++i) {
          if (text[i] == '\\') ++i;
          else if (text[i] == '\n') ++line;
          if (i < text.size()) s += text[i];
        }
        last_string = std::move(s);
        continue;
      }
      switch (ch) {
        case '{':
        case '[':
          stack.push_back(ch);
          if (stack.size() == 2 && ch == '[') expecting = true;
          break;
        case '}':
        case ']':
          if (!stack.empty()) stack.pop_back();
          break;
        case ':':
          if (stack.size() == 1) {
            key = last_string;
            idx.section[key] = line;
          }
          break;
        case ',':
          if (stack.size() == 2 && stack[1] == '[') expecting = true;
          break;
        default:
          break;
      }
    }
    return idx;
  }
};

// Location has already been attached to these.
class LocatedLoadError : public LoadError {
 public:
  using LoadError::LoadError;
};

class LocatedContradiction : public ContradictionError {
 public:
  using ContradictionError::ContradictionError;
};

const std::set<std::string> kSections{"description", "galois_group", "ppav",  "models",          "model_files",
                                      "classes",     "torsors",      "twists", "identifications", "affine_cells",
                                      "words",       "word_equalities", "links", "families",     "fragments",
                                      "pointcount"};

const json& need(const json& obj, const char* key) {
  if (!obj.is_object()) throw LoadError("expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw LoadError(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : it->get<T>();
}

std::vector<std::uint32_t> primes_of(const json& obj, std::vector<std::uint32_t> fallback) {
  auto ps = get_or(obj, "primes", fallback);
  for (auto p : ps)
    if (!is_prime(p)) throw LoadError("not a prime: " + std::to_string(p));
  return ps;
}

class Loader {
 public:
  Loader(std::string_view text, std::string source, std::string base_dir)
      : source_(std::move(source)), base_dir_(std::move(base_dir)), lines_(LineIndex::scan(text)) {
    const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    try {
      doc_ = blank ? json::object() : json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
      throw LoadError(source_ + ": " + e.what());
    }
    if (doc_.is_null()) doc_ = json::object();
    if (!doc_.is_object()) throw LoadError(source_ + ": top level must be an object");
    for (auto it = doc_.begin(); it != doc_.end(); ++it)
      if (!kSections.contains(it.key())) fail(it.key(), std::nullopt, "unknown section");
  }

  std::unique_ptr<Workspace> load() {
    ws_ = std::make_unique<Workspace>();
    ws_->source = source_;
    in_section("galois_group", std::nullopt, [&] { ws_->universe = Universe(galois_group()); });
    Universe& u = ws_->universe;
    for_each("ppav", [&](const json& e, std::size_t) { u.ppav(e.get<std::string>()); });
    load_models();

    index("classes", pending_classes_, "label");
    index("torsors", pending_classes_, "label");
    index("twists", pending_classes_, "label");
    for (const char* s : {"classes", "torsors", "twists"})
      for_each(s, [&](const json& e, std::size_t) { resolve(need(e, "label").get<std::string>()); });

    for_each("identifications", [&](const json& e, std::size_t) {
      if (!e.is_array() || e.size() < 2) throw LoadError("an identification lists at least two classes");
      ClassId first = resolve(e[0].get<std::string>());
      for (std::size_t i = 1; i < e.size(); ++i) u.declare_birational(first, resolve(e[i].get<std::string>()));
    });
    for_each("affine_cells", [&](const json& e, std::size_t) {
      u.declare_affine_cell(resolve(need(e, "variety").get<std::string>()),
                            resolve(need(e, "divisor").get<std::string>()));
    });

    index("words", pending_words_, "name");
    index("links", pending_links_, "name");
    for_each("links", [&](const json& e, std::size_t) { ensure_link(need(e, "name").get<std::string>()); });
    for_each("words", [&](const json& e, std::size_t) { word_by_name(need(e, "name").get<std::string>()); });

    for_each("word_equalities", [&](const json& e, std::size_t) {
      WordEquality eq{need(e, "left").get<std::string>(), need(e, "right").get<std::string>(), std::nullopt};
      expression(eq.left);
      expression(eq.right);
      if (e.contains("fragment")) eq.fragment = e["fragment"].get<std::string>();
      ws_->word_equalities.push_back(std::move(eq));
    });
    for_each("families", [&](const json& e, std::size_t) { load_family(e); });
    for_each("fragments", [&](const json& e, std::size_t) { load_fragment(e); });
    for (const auto& eq : ws_->word_equalities)
      if (eq.fragment && !ws_->fragments.contains(*eq.fragment))
        fail("word_equalities", std::nullopt, "unknown fragment '" + *eq.fragment + "'");
    in_section("pointcount", std::nullopt, [&] { load_pointcount(); });

    u.freeze();
    return std::move(ws_);
  }

 private:
  std::string where(const std::string& section, std::optional<std::size_t> index) const {
    int line = 0;
    if (index) {
      auto it = lines_.elements.find(section);
      if (it != lines_.elements.end() && *index < it->second.size()) line = it->second[*index];
    }
    if (!line) {
      auto it = lines_.section.find(section);
      if (it != lines_.section.end()) line = it->second;
    }
    std::string s = source_;
    if (line) s += ":" + std::to_string(line);
    s += ": " + section;
    if (index) s += "[" + std::to_string(*index) + "]";
    return s;
  }

  [[noreturn]] void fail(const std::string& section, std::optional<std::size_t> index, const std::string& what) const {
    throw LocatedLoadError(where(section, index) + ": " + what);
  }

  // Runs f, attaching the location to any error that does not have one yet.
  template <typename F>
  void in_section(const std::string& section, std::optional<std::size_t> index, F&& f) {
    try {
      f();
    } catch (const LocatedLoadError&) {
      throw;
    } catch (const LocatedContradiction&) {
      throw;
    } catch (const ContradictionError& e) {
      throw LocatedContradiction(where(section, index) + ": " + e.what(), e.rule());
    } catch (const std::exception& e) {
      fail(section, index, e.what());
    }
  }

  template <typename F>
  void for_each(const std::string& section, F&& f) {
    auto it = doc_.find(section);
    if (it == doc_.end()) return;
    if (!it->is_array()) fail(section, std::nullopt, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) in_section(section, i, [&] { f((*it)[i], i); });
  }

  struct Pending {
    std::string section;
    std::size_t index;
  };

  void index(const std::string& section, std::map<std::string, Pending>& into, const char* key) {
    for_each(section, [&](const json& e, std::size_t i) {
      std::string name = need(e, key).get<std::string>();
      if (!into.emplace(name, Pending{section, i}).second) throw LoadError("'" + name + "' is declared twice");
    });
  }

  GaloisGroup galois_group() {
    auto it = doc_.find("galois_group");
    if (it == doc_.end()) return GaloisGroup();
    std::vector<std::string> names;
    std::vector<Permutation> perms;
    for (const auto& e : need(*it, "elements")) {
      names.push_back(need(e, "name").get<std::string>());
      perms.push_back(need(e, "perm").get<Permutation>());
    }
    return GaloisGroup(std::move(names), std::move(perms));
  }

  void load_models() {
    for_each("models", [&](const json& e, std::size_t) {
      std::string text = "model " + need(e, "name").get<std::string>() + "\nambient " +
                         need(e, "ambient").get<std::string>() + "\n";
      for (const auto& p : get_or(e, "eq", std::vector<std::string>{})) text += "eq " + p + "\n";
      for (const auto& p : get_or(e, "open", std::vector<std::string>{})) text += "open " + p + "\n";
      for (auto& v : parse_models(text + "end\n", source_)) ws_->models.add(std::move(v));
    });
    for_each("model_files", [&](const json& e, std::size_t) {
      std::filesystem::path p = e.get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir_) / p;
      std::ifstream in(p);
      if (!in) throw LoadError("cannot read model file '" + p.string() + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      for (auto& v : parse_models(buf.str(), p.string())) ws_->models.add(std::move(v));
    });
  }

  // -- classes ----------------------------------------------------------------

  ClassId resolve(const std::string& label) {
    Universe& u = ws_->universe;
    if (auto id = u.find(label)) return *id;
    if (auto it = pending_classes_.find(label); it != pending_classes_.end()) {
      if (!in_progress_.insert("class:" + label).second) throw LoadError("circular reference to class '" + label + "'");
      const Pending p = it->second;
      const json& e = doc_[p.section][p.index];
      std::optional<ClassId> out;
      in_section(p.section, p.index, [&] { out = register_declared(p.section, e); });
      in_progress_.erase("class:" + label);
      return *out;
    }
    if (auto n = builtin_space(label, 'P')) return u.projective_space(*n);
    if (auto n = builtin_space(label, 'A')) return u.affine_space(*n);
    if (label == "pt") return u.point();
    auto parts = split_product(label);
    if (parts.size() > 1) {
      std::vector<ClassId> ids;
      for (const auto& part : parts) ids.push_back(resolve(part));
      return u.product(ids);
    }
    throw LoadError("unknown class '" + label + "'");
  }

  ClassId register_declared(const std::string& section, const json& e) {
    Universe& u = ws_->universe;
    const std::string label = need(e, "label").get<std::string>();
    if (section == "torsors") {
      auto t = TorsorClass::make(need(e, "base").get<std::string>(), get_or(e, "j_not_1728", false),
                                 need(e, "ambient").get<std::vector<std::int64_t>>(),
                                 need(e, "element").get<std::vector<std::int64_t>>());
      return u.torsor_curve(label, t);
    }
    if (section == "twists")
      return u.twist(resolve(need(e, "of").get<std::string>()), need(e, "k").get<std::int64_t>(), label);
    return u.register_class(label, class_meta(e));
  }

  ClassMeta class_meta(const json& e) {
    Universe& u = ws_->universe;
    const GaloisGroup& gamma = u.galois();
    ClassMeta m;
    m.dimension = need(e, "dim").get<int>();
    if (e.contains("flags")) {
      for (const auto& f : e["flags"]) m.flags.set(parse_flag(f.get<std::string>()));
    } else {
      m.flags = smooth_projective();
    }
    if (e.contains("picard_rank")) m.picard_rank = e["picard_rank"].get<int>();
    if (e.contains("degree")) m.degree_invariant = e["degree"].get<std::int64_t>();
    if (e.contains("components")) {
      const json& c = e["components"];
      GaloisSet set = GaloisSet::trivial(gamma, need(c, "size").get<std::size_t>());
      if (c.contains("action"))
        for (const auto& [g, perm] : c["action"].items()) set.action[gamma.index_of(g)] = perm.get<Permutation>();
      m.components = std::move(set);
    }
    if (e.contains("ns_character")) m.ns_character = character(e["ns_character"]);
    if (e.contains("ruled_over")) m.ruled_over = resolve(e["ruled_over"].get<std::string>());
    if (e.contains("jacobian")) {
      std::vector<BasisId> jac;
      for (const auto& a : e["jacobian"]) jac.push_back(u.ppav(a.get<std::string>()));
      m.jacobian = std::move(jac);
    }
    for (const auto& p : get_or(e, "parts", std::vector<std::string>{})) m.parts.push_back(resolve(p));
    for (const auto& p : get_or(e, "not_isomorphic_to", std::vector<std::string>{}))
      m.not_isomorphic_to.push_back(resolve(p));
    if (e.contains("fm_partner")) m.fm_partner = resolve(e["fm_partner"].get<std::string>());
    if (e.contains("model")) {
      m.model = e["model"].get<std::string>();
      if (!ws_->models.find(*m.model)) throw LoadError("unknown model '" + *m.model + "'");
    }
    return m;
  }

  CharacterVector character(const json& j) {
    const GaloisGroup& gamma = ws_->universe.galois();
    CharacterVector chi = CharacterVector::zero(gamma);
    if (j.is_array()) {
      if (j.size() != gamma.order()) throw LoadError("character has the wrong length");
      for (std::size_t g = 0; g < j.size(); ++g) chi.values[g] = j[g].get<long long>();
    } else {
      std::set<std::size_t> seen;
      for (const auto& [g, v] : j.items()) {
        seen.insert(gamma.index_of(g));
        chi.values[gamma.index_of(g)] = v.get<long long>();
      }
      if (seen.size() != gamma.order()) throw LoadError("character must give a value for every group element");
    }
    return chi;
  }

  GroupElement class_sum(const json& j) {
    GroupElement x;
    if (j.is_string()) {
      x.add_term(resolve(j.get<std::string>()), 1);
    } else if (j.is_array()) {
      for (const auto& l : j) x.add_term(resolve(l.get<std::string>()), 1);
    } else {
      for (const auto& [label, coeff] : j.items()) x.add_term(resolve(label), coeff.get<long long>());
    }
    return x;
  }

  CutAndPaste cut_and_paste(const json& e) {
    return CutAndPaste{resolve(need(e, "total").get<std::string>()), resolve(need(e, "open").get<std::string>()),
                       class_sum(need(e, "closed"))};
  }

  // -- words and links ----------------------------------------------------------

  const BirWord& word_by_name(const std::string& name) {
    auto& words = ws_->words;
    if (auto it = words.find(name); it != words.end()) return it->second;
    if (auto it = pending_words_.find(name); it != pending_words_.end()) {
      if (!in_progress_.insert("word:" + name).second) throw LoadError("circular reference to word '" + name + "'");
      const Pending p = it->second;
      in_section(p.section, p.index, [&] { build_word(name, doc_[p.section][p.index]); });
      in_progress_.erase("word:" + name);
      return words.at(name);
    }
    if (auto dot = name.rfind('.'); dot != std::string::npos) {
      const std::string link = name.substr(0, dot);
      if (pending_links_.contains(link)) {
        ensure_link(link);
        if (auto it = words.find(name); it != words.end()) return it->second;
      }
    }
    throw LoadError("unknown word '" + name + "'");
  }

  BirWord expression(const std::string& expr) {
    Universe& u = ws_->universe;
    std::optional<BirWord> acc;
    std::size_t start = 0;
    while (start <= expr.size()) {
      std::size_t end = expr.find('*', start);
      if (end == std::string::npos) end = expr.size();
      std::string atom = expr.substr(start, end - start);
      bool inverse = false;
      if (atom.size() > 3 && atom.ends_with("^-1")) {
        inverse = true;
        atom.resize(atom.size() - 3);
      }
      BirWord w = atom == "identity"          ? BirWord::identity(u, u.point())
                  : atom.starts_with("id:")  ? BirWord::identity(u, resolve(atom.substr(3)))
                                             : word_by_name(atom);
      if (inverse) w = invert(w);
      acc = acc ? compose(u, *acc, w) : w;
      start = end + 1;
    }
    return *acc;
  }

  BlowUp blowup(const json& b, std::optional<std::string> result_label = std::nullopt) {
    Universe& u = ws_->universe;
    ClassId base = resolve(need(b, "base").get<std::string>());
    ClassId center = resolve(need(b, "center").get<std::string>());
    const int codim = get_or(b, "codim", u.dim(base) - u.dim(center));
    if (b.contains("result")) result_label = b["result"].get<std::string>();
    if (result_label) resolve_if_declared(*result_label);
    std::optional<ClassId> exceptional;
    if (b.contains("exceptional")) exceptional = resolve(b["exceptional"].get<std::string>());
    return make_blowup(u, base, center, codim, result_label, exceptional);
  }

  void resolve_if_declared(const std::string& label) {
    if (pending_classes_.contains(label)) resolve(label);
  }

  BirWord letter(const json& l) {
    Universe& u = ws_->universe;
    const bool inverse = get_or(l, "inverse", false);
    BirWord w = BirWord::identity(u, u.point());
    if (l.contains("blowup")) {
      w = BirWord::single(u, blowup(l["blowup"]));
    } else if (l.contains("restrict")) {
      const json& r = l["restrict"];
      ClassId ambient = resolve(need(r, "ambient").get<std::string>());
      const std::string open = need(r, "open").get<std::string>();
      resolve_if_declared(open);
      ClassId open_id;
      if (auto id = u.find(open)) {
        open_id = *id;
      } else {
        ClassMeta m = u.meta(ambient);
        m.flags.set(Flag::Projective, false);
        m.picard_rank.reset();
        m.model.reset();
        m.ns_character.reset();
        m.jacobian.reset();
        m.parts.clear();
        m.not_isomorphic_to.clear();
        m.fm_partner.reset();
        m.degree_invariant.reset();
        m.torsor.reset();
        open_id = u.register_class(open, std::move(m));
      }
      w = BirWord::single(u, make_restriction(u, ambient, open_id, class_sum(need(r, "complement"))));
    } else if (l.contains("iso")) {
      const json& i = l["iso"];
      w = BirWord::single(u, make_iso(u, resolve(need(i, "source").get<std::string>()),
                                      resolve(need(i, "target").get<std::string>()), get_or(i, "pseudo", false)));
    } else if (l.contains("word")) {
      w = expression(l["word"].get<std::string>());
    } else if (l.contains("strong_rational")) {
      w = strong_rational_witness(u, resolve(l["strong_rational"].get<std::string>()));
    } else {
      throw LoadError("letter must be one of blowup, restrict, iso, word, strong_rational");
    }
    return inverse ? invert(w) : w;
  }

  void build_word(const std::string& name, const json& e) {
    Universe& u = ws_->universe;
    std::optional<BirWord> w;
    if (e.contains("conjugate")) {
      const json& c = e["conjugate"];
      w = pseudo_reg_conjugate(u, expression(need(c, "alpha").get<std::string>()),
                               expression(need(c, "gamma").get<std::string>()));
    } else if (e.contains("product")) {
      const json& p = e["product"];
      w = product_word(u, expression(need(p, "word").get<std::string>()),
                       resolve(need(p, "factor").get<std::string>()));
    } else {
      for (const auto& l : need(e, "letters")) {
        BirWord next = letter(l);
        w = w ? compose(u, *w, next) : next;
      }
      if (!w && !e.contains("source")) throw LoadError("an empty word needs a source");
    }
    if (e.contains("source") || e.contains("target")) {
      ClassId src = e.contains("source") ? resolve(e["source"].get<std::string>()) : w->source();
      ClassId tgt = e.contains("target") ? resolve(e["target"].get<std::string>()) : w ? w->target() : src;
      w = BirWord(u, src, tgt, w ? w->letters() : std::vector<Letter>{});
    }
    WordChecks checks;
    checks.realize = get_or(e, "realize", std::vector<std::string>{});
    for (const auto& r : checks.realize)
      if (r != "sigma" && r != "j") throw LoadError("unknown realization '" + r + "'");
    if (e.contains("expect_c")) checks.expect_c = e["expect_c"].get<std::string>();
    if (e.contains("expect_tilde_c")) checks.expect_tilde_c = e["expect_tilde_c"].get<std::string>();
    ws_->word_checks[name] = std::move(checks);
    ws_->words.emplace(name, std::move(*w));
  }

  void ensure_link(const std::string& name) {
    if (ws_->links.contains(name)) return;
    auto it = pending_links_.find(name);
    if (it == pending_links_.end()) throw LoadError("unknown link '" + name + "'");
    if (!in_progress_.insert("link:" + name).second) throw LoadError("circular reference to link '" + name + "'");
    const Pending p = it->second;
    in_section(p.section, p.index, [&] { build_link(name, doc_[p.section][p.index]); });
    in_progress_.erase("link:" + name);
  }

  void build_link(const std::string& name, const json& e) {
    Universe& u = ws_->universe;
    ModelRegistry& models = ws_->models;
    const std::string kind = need(e, "kind").get<std::string>();
    std::optional<LLink> link;
    if (kind == "elliptic") {
      std::optional<std::string> twist;
      if (e.contains("twist_label")) twist = e["twist_label"].get<std::string>();
      link = elliptic_link(u, models, resolve(need(e, "curve").get<std::string>()), name, twist);
    } else if (kind == "k3") {
      link = k3_link(u, models, resolve(need(e, "s").get<std::string>()), resolve(need(e, "s_prime").get<std::string>()),
                     name);
    } else if (kind == "g2") {
      link = g2_link(u, models, name);
    } else if (kind == "stabilized") {
      const std::string base = need(e, "link").get<std::string>();
      ensure_link(base);
      link = stabilized_link(u, models, ws_->links.at(base), resolve(need(e, "factor").get<std::string>()), name);
    } else if (kind == "custom") {
      const std::string top = need(e, "top").get<std::string>();
      resolve_if_declared(top);
      BlowUp left = blowup(need(e, "left"), top);
      BlowUp right = blowup(need(e, "right"), top);
      L1Witness l1 = ModelWitness{};
      const json& w1 = need(e, "l1");
      if (w1.contains("relations")) {
        K0Witness kw;
        for (const auto& r : w1["relations"]) kw.relations.push_back(cut_and_paste(r));
        l1 = std::move(kw);
      } else {
        l1 = ModelWitness{primes_of(w1, {2, 3, 5})};
      }
      link = make_link(u, models,
                       LinkSpec{name, left, right, std::move(l1), expression(need(e, "l2").get<std::string>()),
                                get_or(e, "exceptional_override", false)});
    } else {
      throw LoadError("unknown link kind '" + kind + "'");
    }
    ws_->words.emplace(name + ".psi", link_word(u, *link));
    ws_->words.emplace(name + ".gamma", link->witness_l2());
    ws_->words.emplace(name + ".endo", endo_word(u, *link));
    if (e.contains("expect")) ws_->link_expect[name] = e["expect"].get<std::string>();
    ws_->links.emplace(name, std::move(*link));
  }

  void load_family(const json& e) {
    FamilyDecl d;
    d.family.name = need(e, "name").get<std::string>();
    for (const auto& l : need(e, "links")) d.family.links.push_back(&ws_->links.at(checked_link(l.get<std::string>())));
    validate_family(ws_->universe, d.family);
    for (const auto& x : get_or(e, "expect", json::array())) {
      const std::string w = need(x, "word").get<std::string>();
      expression(w);
      std::vector<Integer> image;
      for (const auto& v : need(x, "image")) image.push_back(v.get<long long>());
      if (image.size() != d.family.links.size()) throw LoadError("image of '" + w + "' has the wrong length");
      d.expect.emplace_back(w, std::move(image));
    }
    d.spans = get_or(e, "spans", false);
    if (!ws_->families.emplace(d.family.name, std::move(d)).second) throw LoadError("family declared twice");
  }

  const std::string& checked_link(const std::string& name) {
    ensure_link(name);
    return name;
  }

  void load_fragment(const json& e) {
    Universe& u = ws_->universe;
    FragmentDecl d;
    const std::string name = need(e, "name").get<std::string>();
    d.fragment = Fragment(need(e, "n").get<int>());
    Fragment& f = d.fragment;
    for (const auto& c : get_or(e, "classes", json::array())) f.add_class(u, resolve(c.get<std::string>()));
    for (const auto& r : get_or(e, "relations", json::array())) f.add_relation(u, cut_and_paste(r));
    for (const auto& w : get_or(e, "words", json::array())) f.add_word(u, expression(w.get<std::string>()));
    for (const auto& l : get_or(e, "links", json::array())) add_link(u, f, ws_->links.at(checked_link(l.get<std::string>())));
    if (get_or(e, "product_strata", false)) f.add_product_strata(u);
    if (get_or(e, "saturate", false)) saturate(u, f);
    if (e.contains("expect")) {
      const json& x = e["expect"];
      if (x.contains("lower")) d.expect_lower = x["lower"].get<std::string>();
      if (x.contains("upper")) d.expect_upper = x["upper"].get<std::string>();
      if (x.contains("kernel")) d.expect_kernel = x["kernel"].get<std::string>();
    }
    for (const auto& l : get_or(e, "l_equiv", json::array())) {
      LEquivDecl q{need(l, "x").get<std::string>(), need(l, "y").get<std::string>(), need(l, "d").get<int>(),
                   get_or(l, "expect", true)};
      resolve(q.x);
      resolve(q.y);
      d.l_equiv.push_back(std::move(q));
    }
    if (!ws_->fragments.emplace(name, std::move(d)).second) throw LoadError("fragment '" + name + "' declared twice");
  }

  void load_pointcount() {
    auto it = doc_.find("pointcount");
    if (it == doc_.end()) return;
    const json& pc = *it;
    auto model = [&](const std::string& m) {
      if (!ws_->models.find(m)) throw LoadError("unknown model '" + m + "'");
      return m;
    };
    ws_->relator_primes = primes_of(pc, ws_->relator_primes);
    for (const auto& c : get_or(pc, "counts", json::array()))
      ws_->counts.push_back({model(need(c, "model").get<std::string>()), need(c, "q").get<std::uint32_t>(),
                             need(c, "expect").get<std::uint64_t>()});
    for (const auto& b : get_or(pc, "blowups", json::array()))
      ws_->blowup_counts.push_back({model(need(b, "base").get<std::string>()),
                                    model(need(b, "center").get<std::string>()),
                                    model(need(b, "blowup").get<std::string>()), need(b, "codim").get<int>(),
                                    primes_of(b, ws_->relator_primes)});
    for (const auto& c : get_or(pc, "cut_and_paste", json::array()))
      ws_->cut_counts.push_back({model(need(c, "total").get<std::string>()), model(need(c, "open").get<std::string>()),
                                 model(need(c, "closed").get<std::string>()), primes_of(c, ws_->relator_primes)});
  }

  std::string source_;
  std::string base_dir_;
  LineIndex lines_;
  json doc_;
  std::unique_ptr<Workspace> ws_;
  std::map<std::string, Pending> pending_classes_;
  std::map<std::string, Pending> pending_words_;
  std::map<std::string, Pending> pending_links_;
  std::set<std::string> in_progress_;
};

}  // namespace

// ---------------------------------------------------------------------------

ClassId Workspace::class_ref(const std::string& label) const {
  if (auto id = universe.find(label)) return *id;
  auto parts = split_product(label);
  if (parts.size() > 1) {
    std::vector<ClassId> ids;
    for (const auto& p : parts) ids.push_back(class_ref(p));
    if (auto id = universe.find_product(ids)) return *id;
  }
  throw LoadError("unknown class '" + label + "'");
}

const LLink& Workspace::link(const std::string& name) const {
  auto it = links.find(name);
  if (it == links.end()) throw LoadError("unknown link '" + name + "'");
  return it->second;
}

BirWord Workspace::word(const std::string& expr) const {
  std::optional<BirWord> acc;
  std::size_t start = 0;
  while (start <= expr.size()) {
    std::size_t end = expr.find('*', start);
    if (end == std::string::npos) end = expr.size();
    std::string atom = expr.substr(start, end - start);
    bool inverse = false;
    if (atom.size() > 3 && atom.ends_with("^-1")) {
      inverse = true;
      atom.resize(atom.size() - 3);
    }
    std::optional<BirWord> w;
    if (atom == "identity") {
      w = BirWord::identity(universe, ClassId{0});
    } else if (atom.starts_with("id:")) {
      w = BirWord::identity(universe, class_ref(atom.substr(3)));
    } else if (auto it = words.find(atom); it != words.end()) {
      w = it->second;
    } else {
      throw LoadError("unknown word '" + atom + "'");
    }
    if (inverse) w = invert(*w);
    acc = acc ? compose(universe, *acc, *w) : *w;
    start = end + 1;
  }
  return *acc;
}

std::unique_ptr<Workspace> load_text(std::string_view text, const std::string& source, const std::string& base_dir) {
  return Loader(text, source, base_dir).load();
}

std::unique_ptr<Workspace> load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read universe file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_text(buf.str(), path, std::filesystem::path(path).parent_path().string());
}

// ---------------------------------------------------------------------------

bool Report::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ojson to_json(const Report& r) {
  ojson j;
  j["command"] = r.command;
  j["pass"] = r.pass();
  j["text"] = r.text;
  j["values"] = r.values;
  ojson checks = ojson::array();
  for (const auto& c : r.checks)
    checks.push_back({{"kind", c.kind}, {"subject", c.subject}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = std::move(checks);
  return j;
}

Report report_from_json(const ojson& j) {
  Report r;
  r.command = j.at("command").get<std::string>();
  r.text = j.at("text").get<std::vector<std::string>>();
  r.values = j.at("values");
  for (const auto& c : j.at("checks"))
    r.checks.push_back({c.at("kind").get<std::string>(), c.at("subject").get<std::string>(), c.at("pass").get<bool>(),
                        c.at("detail").get<std::string>()});
  if (j.at("pass").get<bool>() != r.pass()) throw LoadError("report pass flag disagrees with its checks");
  return r;
}

std::string render_text(const Report& r) {
  std::string s;
  for (const auto& line : r.text) s += line + "\n";
  return s;
}

namespace {

std::string element_string(const Universe& u, const GroupElement& x) { return x.to_string(u.labels()); }

Check check(std::string kind, std::string subject, bool pass, std::string detail) {
  return Check{std::move(kind), std::move(subject), pass, std::move(detail)};
}

// Evaluates c with its built-in cross-check against π(ṽc).
std::pair<std::optional<GroupElement>, Check> checked_c(const Universe& u, const std::string& name, const BirWord& w) {
  try {
    GroupElement v = c(u, w);
    return {v, check("compat", name, true, "c = pi(tilde_c) = " + element_string(u, v))};
  } catch (const std::logic_error& e) {
    return {std::nullopt, check("compat", name, false, e.what())};
  }
}

void add_check_line(Report& r, const Check& c) {
  r.text.push_back(std::string(c.pass ? "PASS" : "FAIL") + "  " + c.kind + " " + c.subject + ": " + c.detail);
  r.checks.push_back(c);
}

ojson rows_json(const std::vector<std::vector<Integer>>& rows) {
  ojson j = ojson::array();
  for (const auto& row : rows) {
    ojson r = ojson::array();
    for (const auto& v : row) r.push_back(v.str());
    j.push_back(std::move(r));
  }
  return j;
}

const FragmentDecl& fragment_decl(const Workspace& w, const std::string& name) {
  auto it = w.fragments.find(name);
  if (it == w.fragments.end()) throw LoadError("unknown fragment '" + name + "'");
  return it->second;
}

std::vector<Check> fragment_checks(const Workspace& w, const std::string& name, const FragmentDecl& d,
                                   ojson* values) {
  const Universe& u = w.universe;
  ExactnessReport rep = exactness_report(u, d.fragment);
  std::vector<Check> out;
  out.push_back(check("k0", name + ".pi", rep.pi_well_defined && rep.pi_surjective,
                      std::string("pi_") + std::to_string(rep.n) + " well-defined: " +
                          (rep.pi_well_defined ? "yes" : "no") + ", surjective: " + (rep.pi_surjective ? "yes" : "no")));
  out.push_back(check("k0", name + ".exact", rep.image_equals_kernel,
                      std::string("Im(iota) = Ker(pi): ") + (rep.image_equals_kernel ? "yes" : "no")));
  out.push_back(check("k0", name + ".kernel", rep.kernel.contains,
                      std::string("Ker(iota) contains tilde_c: ") + (rep.kernel.contains ? "yes" : "no") +
                          ", equal: " + (rep.kernel.equal ? "yes" : "no")));
  auto expect = [&](const char* what, const std::optional<std::string>& e, const GroupInvariants& got) {
    if (e)
      out.push_back(check("k0", name + "." + what + "-invariants", *e == got.to_string(),
                          std::string(what) + " = " + got.to_string() + " (expected " + *e + ")"));
  };
  expect("lower", d.expect_lower, rep.lower_invariants);
  expect("upper", d.expect_upper, rep.upper_invariants);
  expect("kernel", d.expect_kernel, rep.kernel.kernel_invariants);
  if (values) {
    (*values)["n"] = rep.n;
    (*values)["lower"] = rep.lower_invariants.to_string();
    (*values)["upper"] = rep.upper_invariants.to_string();
    (*values)["kernel"] = rep.kernel.kernel_invariants.to_string();
    (*values)["pi_well_defined"] = rep.pi_well_defined;
    (*values)["pi_surjective"] = rep.pi_surjective;
    (*values)["image_equals_kernel"] = rep.image_equals_kernel;
    (*values)["kernel_contains_tilde_c"] = rep.kernel.contains;
    (*values)["kernel_equals_tilde_c"] = rep.kernel.equal;
  }
  return out;
}

}  // namespace

Report c_eval(const Workspace& w, const std::string& expr) {
  const Universe& u = w.universe;
  BirWord word = w.word(expr);
  Report r{"c-eval", {}, ojson::object(), {}};
  auto [value, compat] = checked_c(u, expr, word);
  r.checks.push_back(compat);
  r.values["word"] = expr;
  r.values["source"] = u.label(word.source());
  r.values["target"] = u.label(word.target());
  if (value) {
    r.values["c"] = element_string(u, *value);
    r.text.push_back(element_string(u, *value));
  } else {
    r.text.push_back("error: " + compat.detail);
  }
  return r;
}

Report tilde_c_eval(const Workspace& w, const std::string& expr) {
  const Universe& u = w.universe;
  BirWord word = w.word(expr);
  Report r{"tilde-c-eval", {}, ojson::object(), {}};
  GroupElement v = tilde_c(u, word);
  r.values["word"] = expr;
  r.values["tilde_c"] = element_string(u, v);
  r.text.push_back(element_string(u, v));
  return r;
}

Report link_check(const Workspace& w, const std::string& name) {
  const Universe& u = w.universe;
  const LLink& l = w.link(name);
  Report r{"link check", {}, ojson::object(), {}};
  const Nontriviality nt = nontrivial(u, l);
  const std::string cs = element_string(u, l.c());
  r.values["link"] = name;
  r.values["left"] = u.label(l.left());
  r.values["right"] = u.label(l.right());
  r.values["top"] = u.label(l.top());
  r.values["c"] = cs;
  r.values["nontrivial"] = nt.to_string();
  r.text.push_back("nontrivial: " + nt.to_string() + "; c = " + cs);
  auto it = w.link_expect.find(name);
  if (it != w.link_expect.end())
    r.checks.push_back(check("link", name, nt.to_string() == it->second,
                             "nontrivial: " + nt.to_string() + " (expected " + it->second + ")"));
  else
    r.checks.push_back(check("link", name, nt.kind == Nontriviality::Kind::Yes, "nontrivial: " + nt.to_string()));
  return r;
}

Report cremona_eval(const Workspace& w, const std::string& family, const std::string& expr) {
  auto it = w.families.find(family);
  if (it == w.families.end()) throw LoadError("unknown family '" + family + "'");
  BirWord word = w.word(expr);
  auto rows = cremona_hom(w.universe, it->second.family, std::span<const BirWord>(&word, 1));
  Report r{"cremona eval", {vector_string(rows[0])}, ojson::object(), {}};
  r.values["family"] = family;
  r.values["word"] = expr;
  r.values["image"] = rows_json(rows)[0];
  return r;
}

Report k0_report(const Workspace& w, const std::string& fragment) {
  const FragmentDecl& d = fragment_decl(w, fragment);
  Report r{"k0 report", {}, ojson::object(), {}};
  r.values["fragment"] = fragment;
  for (const auto& c : fragment_checks(w, fragment, d, &r.values)) add_check_line(r, c);
  const int n = d.fragment.level();
  r.text.insert(r.text.begin(), {"K0(<=" + std::to_string(n - 1) + ") = " + r.values["lower"].get<std::string>(),
                                 "K0(<=" + std::to_string(n) + ") = " + r.values["upper"].get<std::string>(),
                                 "Ker(iota) = " + r.values["kernel"].get<std::string>()});
  return r;
}

Report l_equiv(const Workspace& w, const std::string& x, const std::string& y, int d, const std::string& fragment) {
  const FragmentDecl& fd = fragment_decl(w, fragment);
  TruncatedK0 t = fd.fragment.build(w.universe);
  const bool eq = l_equivalence(w.universe, w.class_ref(x), w.class_ref(y), d, t);
  Report r{"l-equiv", {eq ? "true" : "false"}, ojson::object(), {}};
  r.values["x"] = x;
  r.values["y"] = y;
  r.values["d"] = d;
  r.values["fragment"] = fragment;
  r.values["l_equivalent"] = eq;
  r.checks.push_back(check("l-equiv", x + "," + y, eq, "L^" + std::to_string(d) + "([" + x + "] - [" + y + "])" +
                                                          (eq ? " = 0" : " != 0")));
  return r;
}

Report count_points(const ModelRegistry& models, const std::string& model, std::uint32_t q, const RunOptions& o) {
  const ExplicitVariety* v = models.find(model);
  if (!v) throw LoadError("unknown model '" + model + "'");
  if (!is_prime(q)) throw LoadError("q must be prime");
  const std::uint64_t n = count(*v, q, CountOptions{o.jobs, o.budget});
  Report r{"count", {std::to_string(n)}, ojson::object(), {}};
  r.values["model"] = model;
  r.values["q"] = q;
  r.values["count"] = n;
  return r;
}

Report verify_all(const Workspace& w, const RunOptions& o) {
  const Universe& u = w.universe;
  const CountOptions co{o.jobs, o.budget};
  Report r{"verify all", {}, ojson::object(), {}};
  r.values["universe"] = w.source;
  r.values["classes"] = u.size();
  r.values["links"] = w.links.size();
  r.values["words"] = w.words.size();

  auto guarded = [&](const std::string& kind, const std::string& subject, const std::function<Check()>& f) {
    try {
      add_check_line(r, f());
    } catch (const std::exception& e) {
      add_check_line(r, check(kind, subject, false, e.what()));
    }
  };

  for (const auto& [name, word] : w.words) {
    auto [value, compat] = checked_c(u, name, word);
    add_check_line(r, compat);
    auto it = w.word_checks.find(name);
    if (it == w.word_checks.end()) continue;
    const WordChecks& wc = it->second;
    if (wc.expect_c && value)
      add_check_line(r, check("expect-c", name, element_string(u, *value) == *wc.expect_c,
                              "c = " + element_string(u, *value) + " (expected " + *wc.expect_c + ")"));
    if (wc.expect_tilde_c) {
      const std::string got = element_string(u, tilde_c(u, word));
      add_check_line(r, check("expect-tilde-c", name, got == *wc.expect_tilde_c,
                              "tilde_c = " + got + " (expected " + *wc.expect_tilde_c + ")"));
    }
    for (const auto& real : wc.realize) {
      guarded(real, name, [&] {
        Verdict v = real == "sigma" ? check_picnb(u, word) : check_jacobian(u, word);
        return check(real, name, v.pass, v.detail);
      });
    }
  }

  for (const auto& [name, link] : w.links) {
    Report lr = link_check(w, name);
    for (auto& c : lr.checks) {
      c.detail += "; c = " + element_string(u, link.c());
      add_check_line(r, c);
    }
  }

  for (const auto& [name, d] : w.families) {
    std::vector<BirWord> words;
    for (const auto& [expr, image] : d.expect) words.push_back(w.word(expr));
    guarded("cremona", name, [&] {
      auto rows = cremona_hom(u, d.family, words);
      bool ok = true;
      std::string detail;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        ok = ok && rows[i] == d.expect[i].second;
        detail += (i ? ", " : "") + d.expect[i].first + " -> " + vector_string(rows[i]);
      }
      if (d.spans) {
        std::vector<std::vector<Integer>> generators;
        for (std::size_t i = 0; i < rows.size(); ++i)
          if (!std::all_of(rows[i].begin(), rows[i].end(), [](const Integer& v) { return v.is_zero(); }))
            generators.push_back(rows[i]);
        const bool spans = spans_standard_lattice(generators, d.family.links.size());
        ok = ok && spans;
        detail += std::string("; image ") + (spans ? "=" : "!=") + " Z^" + std::to_string(d.family.links.size());
      }
      return check("cremona", name, ok, detail);
    });
  }

  for (const auto& eq : w.word_equalities) {
    const std::string subject = eq.left + " = " + eq.right;
    guarded("word-equality", subject, [&] {
      BirWord a = w.word(eq.left);
      BirWord b = w.word(eq.right);
      GroupElement ca = c(u, a);
      GroupElement cb = c(u, b);
      bool ok = ca == cb && u.birational(a.source(), b.source()) && u.birational(a.target(), b.target());
      std::string detail = "c = " + element_string(u, ca) + " and " + element_string(u, cb);
      if (eq.fragment) {
        const FragmentDecl& fd = fragment_decl(w, *eq.fragment);
        TruncatedK0 t = fd.fragment.truncate(u, a.dimension() - 1);
        const bool same = t.is_zero(tilde_c(u, a) - tilde_c(u, b));
        ok = ok && same;
        detail += std::string("; tilde_c ") + (same ? "agree" : "differ") + " in " + *eq.fragment;
      }
      return check("word-equality", subject, ok, detail);
    });
  }

  for (const auto& [name, d] : w.fragments) {
    guarded("k0", name, [&] {
      for (const auto& c : fragment_checks(w, name, d, nullptr)) add_check_line(r, c);
      TruncatedK0 t = d.fragment.build(u);
      for (const auto& q : d.l_equiv) {
        const bool got = l_equivalence(u, w.class_ref(q.x), w.class_ref(q.y), q.d, t);
        add_check_line(r, check("l-equiv", name + ":" + q.x + "," + q.y + ",d=" + std::to_string(q.d),
                                got == q.expect, std::string(got ? "L-equivalent" : "not L-equivalent") +
                                                     (got == q.expect ? "" : " (unexpected)")));
      }
      // Measure of every relator whose classes all carry explicit models.
      std::size_t measured = 0;
      std::size_t skipped = 0;
      bool ok = true;
      std::string bad;
      for (const auto& rel : d.fragment.relations()) {
        GroupElement x = rel.relator();
        bool modelled = true;
        for (const auto& [cls, coeff] : x.terms()) modelled = modelled && w.models.has_model(u, cls);
        if (!modelled) {
          ++skipped;
          continue;
        }
        ++measured;
        for (auto q : w.relator_primes) {
          Integer m = measure(u, w.models, x, q, co);
          if (!m.is_zero()) {
            ok = false;
            bad += " " + element_string(u, x) + " has measure " + m.str() + " over F_" + std::to_string(q) + ";";
          }
        }
      }
      return check("measure", name, ok,
                   std::to_string(measured) + " relators measured, " + std::to_string(skipped) + " without models" +
                       bad);
    });
  }

  for (const auto& c : w.counts) {
    const std::string subject = c.model + "/F_" + std::to_string(c.q);
    guarded("count", subject, [&] {
      const std::uint64_t n = count(*w.models.find(c.model), c.q, co);
      return check("count", subject, n == c.expect,
                   std::to_string(n) + " points (expected " + std::to_string(c.expect) + ")");
    });
  }
  for (const auto& b : w.blowup_counts) {
    for (auto q : b.primes) {
      const std::string subject = b.blowup + "/F_" + std::to_string(q);
      guarded("blowup-count", subject, [&] {
        CountVerdict v = verify_blowup(*w.models.find(b.base), *w.models.find(b.center), *w.models.find(b.blowup),
                                       b.codim, q, co);
        return check("blowup-count", subject, v.pass, v.detail);
      });
    }
  }
  for (const auto& cp : w.cut_counts) {
    for (auto q : cp.primes) {
      const std::string subject = cp.total + "/F_" + std::to_string(q);
      guarded("cut-count", subject, [&] {
        CountVerdict v = verify_cut_and_paste(*w.models.find(cp.total), *w.models.find(cp.open),
                                              *w.models.find(cp.closed), q, co);
        return check("cut-count", subject, v.pass, v.detail);
      });
    }
  }

  std::size_t failed = 0;
  for (const auto& c : r.checks) failed += !c.pass;
  r.values["checks"] = r.checks.size();
  r.values["failed"] = failed;
  r.text.push_back(std::to_string(r.checks.size() - failed) + "/" + std::to_string(r.checks.size()) + " checks pass");
  return r;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"motcalc: motivic invariants of birational maps over a declared universe"};
  app.name("motcalc");
  app.require_subcommand(1);
  app.fallthrough();

  std::string universe_path;
  std::vector<std::string> model_paths;
  bool as_json = false;
  unsigned jobs = 1;
  std::uint64_t budget = 0;
  app.add_option("-u,--universe", universe_path, "Universe file (JSON)");
  app.add_option("--models", model_paths, "Extra model files for `count`");
  app.add_flag("--json", as_json, "Emit the report as JSON");
  app.add_option("--jobs", jobs, "Worker threads for point counting")->check(CLI::Range(1u, 256u));
  app.add_option("--budget", budget, "Point enumeration budget (default: MOTCALC_BUDGET or 1e8)");

  std::string word, name, family, fragment, x, y, model;
  int d = 0;
  std::uint32_t q = 0;
  auto* c_cmd = app.add_subcommand("c-eval", "Evaluate c on a word");
  c_cmd->add_option("word", word, "Word expression")->required();
  auto* tc_cmd = app.add_subcommand("tilde-c-eval", "Evaluate tilde-c on a word");
  tc_cmd->add_option("word", word, "Word expression")->required();
  auto* link_cmd = app.add_subcommand("link", "L-link commands");
  link_cmd->require_subcommand(1);
  auto* link_check_cmd = link_cmd->add_subcommand("check", "Report the link's c and its nontriviality");
  link_check_cmd->add_option("name", name)->required();
  auto* cremona_cmd = app.add_subcommand("cremona", "Cremona homomorphism");
  cremona_cmd->require_subcommand(1);
  auto* cremona_eval_cmd = cremona_cmd->add_subcommand("eval", "Coordinates of c(word) in a link family");
  cremona_eval_cmd->add_option("family", family)->required();
  cremona_eval_cmd->add_option("word", word)->required();
  auto* k0_cmd = app.add_subcommand("k0", "Truncated Grothendieck groups");
  k0_cmd->require_subcommand(1);
  auto* k0_report_cmd = k0_cmd->add_subcommand("report", "Exactness report for a fragment");
  k0_report_cmd->add_option("fragment", fragment)->required();
  auto* leq_cmd = app.add_subcommand("l-equiv", "Test L^d([x] - [y]) = 0 in a fragment");
  leq_cmd->add_option("x", x)->required();
  leq_cmd->add_option("y", y)->required();
  leq_cmd->add_option("d", d)->required();
  leq_cmd->add_option("fragment", fragment)->required();
  auto* count_cmd = app.add_subcommand("count", "Count points of a model over F_q");
  count_cmd->add_option("model", model)->required();
  count_cmd->add_option("q", q)->required();
  auto* verify_cmd = app.add_subcommand("verify", "Verification suites");
  verify_cmd->require_subcommand(1);
  auto* verify_all_cmd = verify_cmd->add_subcommand("all", "Run every declared check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  const RunOptions options{jobs, budget};
  try {
    std::unique_ptr<Workspace> ws;
    auto workspace = [&]() -> const Workspace& {
      if (!ws) {
        if (universe_path.empty()) throw LoadError("no universe file given (use -u)");
        ws = load_file(universe_path);
      }
      return *ws;
    };
    Report report;
    if (c_cmd->parsed()) {
      report = c_eval(workspace(), word);
    } else if (tc_cmd->parsed()) {
      report = tilde_c_eval(workspace(), word);
    } else if (link_check_cmd->parsed()) {
      report = link_check(workspace(), name);
    } else if (cremona_eval_cmd->parsed()) {
      report = cremona_eval(workspace(), family, word);
    } else if (k0_report_cmd->parsed()) {
      report = k0_report(workspace(), fragment);
    } else if (leq_cmd->parsed()) {
      report = l_equiv(workspace(), x, y, d, fragment);
    } else if (count_cmd->parsed()) {
      ModelRegistry extra;
      const ModelRegistry* models = &extra;
      if (!universe_path.empty()) models = &workspace().models;
      if (!model_paths.empty()) {
        if (models != &extra)
          for (const auto& [n, v] : models->all()) extra.add(v);
        for (const auto& p : model_paths) {
          std::ifstream in(p);
          if (!in) throw LoadError("cannot read model file '" + p + "'");
          std::stringstream buf;
          buf << in.rdbuf();
          for (auto& v : parse_models(buf.str(), p)) extra.add(std::move(v));
        }
        models = &extra;
      }
      report = count_points(*models, model, q, options);
    } else if (verify_all_cmd->parsed()) {
      report = verify_all(workspace(), options);
    }
    if (as_json)
      out << to_json(report).dump(2) << "\n";
    else
      out << render_text(report);
    return report.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    err << "motcalc: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace motcalc::cli
