#pragma once

// Universe files, reports and the command-line driver.

#include "motcalc/links.hpp"
#include "motcalc/realize.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace motcalc::cli {

/// Raised for malformed files and unknown names; maps to exit status 2.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WordChecks {
  std::vector<std::string> realize;  ///< "sigma" and/or "j"
  std::optional<std::string> expect_c;
  std::optional<std::string> expect_tilde_c;
};

struct FamilyDecl {
  LinkFamily family;
  std::vector<std::pair<std::string, std::vector<Integer>>> expect;  ///< word -> coordinates
  bool spans = false;  ///< the expected words are generators of Z^J
};

struct LEquivDecl {
  std::string x;
  std::string y;
  int d = 0;
  bool expect = true;
};

struct FragmentDecl {
  Fragment fragment{0};
  std::optional<std::string> expect_lower;
  std::optional<std::string> expect_upper;
  std::optional<std::string> expect_kernel;
  std::vector<LEquivDecl> l_equiv;
};

struct CountDecl {
  std::string model;
  std::uint32_t q = 2;
  std::uint64_t expect = 0;
};

struct BlowupCountDecl {
  std::string base, center, blowup;
  int codim = 2;
  std::vector<std::uint32_t> primes;
};

struct CutCountDecl {
  std::string total, open, closed;
  std::vector<std::uint32_t> primes;
};

struct WordEquality {
  std::string left, right;
  std::optional<std::string> fragment;
};

/// A loaded, frozen universe with everything declared alongside it.
struct Workspace {
  std::string source;
  Universe universe;
  ModelRegistry models;
  std::map<std::string, BirWord> words;
  std::map<std::string, WordChecks> word_checks;
  std::vector<WordEquality> word_equalities;
  std::map<std::string, LLink> links;
  std::map<std::string, std::string> link_expect;
  std::map<std::string, FamilyDecl> families;
  std::map<std::string, FragmentDecl> fragments;
  std::vector<CountDecl> counts;
  std::vector<BlowupCountDecl> blowup_counts;
  std::vector<CutCountDecl> cut_counts;
  std::vector<std::uint32_t> relator_primes{2, 3, 5};

  /// Words are names joined by '*' (left to right), each optionally followed
  /// by ^-1; "identity" and "id:<class>" denote identity maps.
  BirWord word(const std::string& expression) const;
  ClassId class_ref(const std::string& label) const;
  const LLink& link(const std::string& name) const;
};

/// Loads a universe file. Errors carry "<source>:<line>: <section>[<index>]".
std::unique_ptr<Workspace> load_file(const std::string& path);
std::unique_ptr<Workspace> load_text(std::string_view text, const std::string& source = "<universe>",
                                     const std::string& base_dir = ".");

struct Check {
  std::string kind;
  std::string subject;
  bool pass = false;
  std::string detail;
  friend bool operator==(const Check&, const Check&) = default;
};

struct Report {
  std::string command;
  std::vector<std::string> text;  ///< human-readable lines
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  std::vector<Check> checks;

  bool pass() const;
  friend bool operator==(const Report&, const Report&) = default;
};

nlohmann::ordered_json to_json(const Report& r);
Report report_from_json(const nlohmann::ordered_json& j);
std::string render_text(const Report& r);

struct RunOptions {
  unsigned jobs = 1;
  std::uint64_t budget = 0;
};

Report c_eval(const Workspace& w, const std::string& word);
Report tilde_c_eval(const Workspace& w, const std::string& word);
Report link_check(const Workspace& w, const std::string& name);
Report cremona_eval(const Workspace& w, const std::string& family, const std::string& word);
Report k0_report(const Workspace& w, const std::string& fragment);
Report l_equiv(const Workspace& w, const std::string& x, const std::string& y, int d, const std::string& fragment);
Report count_points(const ModelRegistry& models, const std::string& model, std::uint32_t q, const RunOptions& o);
Report verify_all(const Workspace& w, const RunOptions& o);

/// Entry point of the motcalc executable. Returns the exit status:
/// 0 all verdicts pass, 1 a verdict fails, 2 usage, parse or lookup error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace motcalc::cli
