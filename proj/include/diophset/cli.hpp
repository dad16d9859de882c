// Copyright 2026 The diophset Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end. run() is the whole program; tools/diophset.cpp
// only forwards argv. Requires CLI11 and nlohmann/json on the include path.

#include <CLI11.hpp>
#include <json.hpp>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "diophset/construct.hpp"

namespace diophset::cli {

using Json = nlohmann::json;  // std::map objects: keys come out sorted

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitHypothesis = 2,
  kExitParse = 3,
};

// Raised for malformed user input; carries the offending token.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- JSON rendering -------------------------------------------------------

inline Json to_json(const Number& x) { return {{"exact", x.str()}, {"display_decimal", to_decimal(x)}}; }

inline Json to_json(const Enclosure& e) {
  return {{"lower", e.lower.str()}, {"upper", e.upper.str()}, {"display_decimal", to_decimal(e)}};
}

inline Json to_json(const CertifiedReal& x) { return x.is_exact() ? to_json(x.exact()) : to_json(x.enclose(0)); }

inline Json to_json(const Exponent& t) {
  return {{"exact", t.str()}, {"display_decimal", to_decimal(t.enclose(128))}};
}

inline Json to_json(const DiophParams& p) {
  return {{"gamma", to_json(p.gamma())}, {"tau", to_json(p.tau())}, {"kind", std::string(to_string(p.kind()))}};
}

inline Json to_json(const Source& s) { return {{"p", s.p}, {"q", s.q}}; }

inline Json to_json(const MembershipVerdict& v) {
  Json j;
  j["kind"] = std::string(to_string(v.kind()));
  if (v.kind() == VerdictKind::kMember) {
    const auto& c = v.member().certificate;
    j["tail"] = {{"K", c.K}, {"A", c.A.get_str()}, {"q_K", c.q_K.get_str()}, {"bound", to_json(c.bound)},
                 {"trivial", c.trivial}};
    j["equality_k"] = v.member().equality_ks;
  } else if (v.kind() == VerdictKind::kNotMember) {
    const auto& n = v.not_member();
    j["witness_k"] = n.witness_k;
    j["convergent"] = {{"p", n.convergent.p.get_str()}, {"q", n.convergent.q.get_str()}};
    j["lhs"] = n.lhs ? to_json(*n.lhs) : Json(nullptr);
    j["rational_source"] = n.rational_source;
  } else {
    const auto& u = v.unknown();
    j["checked_up_to_k"] = u.checked_up_to_k;
    j["reason"] = u.reason;
    j["bounded_type_candidate"] = u.bounded_type_candidate;
  }
  return j;
}

inline Json to_json(const IsolationCertificate& c) {
  return {{"xi", to_json(c.xi)},
          {"params", to_json(c.params)},
          {"left", {{"p", c.left.p}, {"q", c.left.q}, {"radius", to_json(c.left_radius)}}},
          {"right", {{"p", c.right.p}, {"q", c.right.q}, {"radius", to_json(c.right_radius)}}},
          {"membership", to_json(c.membership)}};
}

inline Json to_json(const CertificationResult& r) {
  Json j;
  j["status"] = std::string(to_string(r.kind()));
  switch (r.kind()) {
    case CertificationResult::Kind::kCertified: j["certificate"] = to_json(r.certificate()); break;
    case CertificationResult::Kind::kRejected:
      j["clause"] = r.rejection().clause;
      j["detail"] = r.rejection().detail;
      break;
    case CertificationResult::Kind::kIncomplete: j["detail"] = r.incomplete().reason; break;
  }
  return j;
}

inline Json to_json(const Theorem1Instance& t) {
  Json checks = Json::array();
  for (const auto& c : t.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"n", t.n},
          {"alpha", to_json(t.alpha)},
          {"gamma", to_json(t.gamma)},
          {"tau", to_json(t.tau)},
          {"p1", t.p1.get_str()},
          {"q1", t.q1.get_str()},
          {"k_tail", t.k_tail},
          {"checks", checks},
          {"certification", to_json(t.certification)},
          {"certified", t.certified()}};
}

inline Json to_json(const Theorem2Instance& t) {
  Json j = {{"alpha", to_json(t.alpha)},
            {"gamma", to_json(t.gamma)},
            {"tau", to_json(t.tau)},
            {"membership", std::string(to_string(t.membership))},
            {"warning", t.warning},
            {"m", t.m.get_str()},
            {"matrix", {{t.m.get_str(), "1"}, {Integer(2 * t.m + 1).get_str(), "2"}}},
            {"determinant", t.determinant.get_str()},
            {"alpha_prime", to_json(t.alpha_prime)}};
  j["tails_agree"] = t.tails ? Json{{"alpha_index", t.tails->first}, {"alpha_prime_index", t.tails->second}}
                             : Json(nullptr);
  if (t.searched) {
    Json s = {{"found", t.search.has_value()}};
    if (t.search) {
      s["grid_index"] = t.search->index;
      s["gamma"] = to_json(t.search->point.gamma);
      s["tau"] = to_json(t.search->point.tau);
      s["certificate"] = to_json(t.search->certificate);
    }
    j["search"] = s;
  }
  return j;
}

// ---- Output ---------------------------------------------------------------

inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string render(const Json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::ostringstream out;
  if (format == "csv") out << "key,value\n";
  for (const auto& [k, v] : rows) out << (format == "csv" ? csv_field(k) + "," + csv_field(v) : k + ": " + v) << "\n";
  return out.str();
}

/// Writes through a temporary file in the same directory, then renames.
inline void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

// ---- Input parsing ----------------------------------------------------------

inline Number parse_number(const std::string& flag, const std::string& text) {
  try {
    return Number::parse(text);
  } catch (const Error& e) {
    throw UsageError(flag + ": cannot parse '" + text + "': " + e.what());
  }
}

inline Exponent parse_exponent(const std::string& text) {
  try {
    return Exponent::parse(text);
  } catch (const Error& e) {
    throw UsageError("--tau: cannot parse '" + text + "': " + e.what());
  }
}

inline DiophParams parse_params(const std::string& gamma, const std::string& tau) {
  Number g = parse_number("--gamma", gamma);
  Exponent t = parse_exponent(tau);
  try {
    return DiophParams(g, t);
  } catch (const Error& e) {
    throw UsageError(std::string("parameters: ") + e.what());
  }
}

inline Source parse_source(const std::string& flag, const std::string& text) {
  static const std::regex re(R"(\s*(-?\d+)\s*/\s*(\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError(flag + ": expected p/q, got '" + text + "'");
  try {
    Source s{std::stol(m[1]), std::stol(m[2])};
    if (s.q <= 0) throw UsageError(flag + ": q must be positive in '" + text + "'");
    return s;
  } catch (const std::out_of_range&) {
    throw UsageError(flag + ": out of range '" + text + "'");
  }
}

inline std::pair<long, long> parse_range(const std::string& text) {
  static const std::regex re(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("--range: expected a..b, got '" + text + "'");
  long a = std::stol(m[1]), b = std::stol(m[2]);
  if (a > b) throw UsageError("--range: empty range '" + text + "'");
  return {a, b};
}

// ---- Commands ---------------------------------------------------------------

struct Options {
  std::string format = "json";
  std::string output;
  unsigned threads = 1;
  unsigned max_precision = kDefaultMaxPrecision;

  std::string xi, gamma, tau, alpha, left, right, csv_path, range;
  long oracle = 0;
  long Q = 1000;
  long n = 0;
  bool search = false;
  long search_Q = 1000;
};

inline Json cmd_member(const Options& o) {
  Number xi = parse_number("--xi", o.xi);
  DiophParams params = parse_params(o.gamma, o.tau);
  MembershipOptions mo;
  mo.max_precision = o.max_precision;
  MembershipVerdict v = is_member(xi, params, mo);
  Json j = {{"command", "member"}, {"xi", to_json(xi)}, {"params", to_json(params)}, {"verdict", to_json(v)}};
  if (o.oracle > 0) {
    BruteForceResult r = brute_force_member(xi, params, o.oracle, o.threads, o.max_precision);
    Json oj = {{"Q", o.oracle}, {"result", std::string(to_string(r.kind))}, {"checked", r.checked.get_str()}};
    if (r.kind == BruteForceResult::Kind::kExcluded) oj["violation"] = {{"p", r.p.get_str()}, {"q", r.q.get_str()}};
    std::string agreement = "inconclusive";
    if (v.kind() == VerdictKind::kMember) {
      agreement = r.kind == BruteForceResult::Kind::kConsistent ? "agree" : "disagree";
    } else if (v.kind() == VerdictKind::kNotMember) {
      Integer needed = CFExpansion::expand(xi).is_finite()
                           ? v.not_member().convergent.q
                           : CFExpansion::expand(xi).convergent(static_cast<long>(v.not_member().witness_k) + 1).q;
      if (r.kind == BruteForceResult::Kind::kExcluded) {
        agreement = "agree";
      } else if (Integer(o.oracle) >= needed) {
        agreement = "disagree";
      }
      oj["needed_Q"] = needed.get_str();
    }
    oj["agreement"] = agreement;
    j["oracle"] = oj;
  }
  return j;
}

inline Json cmd_cover(const Options& o, std::string* csv_out) {
  DiophParams params = parse_params(o.gamma, o.tau);
  if (o.Q < 1) throw UsageError("--Q: must be >= 1, got " + std::to_string(o.Q));
  CoverOptions co;
  co.threads = o.threads;
  IntervalCover cover = build_cover(params, o.Q, co);
  MeasureBounds m = measure_bounds(cover);
  std::vector<TouchingPoint> touch = find_touching_points(cover);
  Json tj = Json::array();
  std::size_t in_unit = 0;
  for (const auto& t : touch) {
    bool unit = t.xi >= Number(0) && t.xi <= Number(1);
    in_unit += unit ? 1 : 0;
    tj.push_back({{"xi", to_json(t.xi)}, {"left", to_json(t.left)}, {"right", to_json(t.right)}, {"in_unit_interval", unit}});
  }
  bool empty = params.is_empty() || proves_empty(cover);
  Json j = {{"command", "cover"},
            {"params", to_json(params)},
            {"Q", o.Q},
            {"band", {{"low", to_json(cover.band_low())}, {"high", to_json(cover.band_high())}}},
            {"interval_count", cover.intervals().size()},
            {"covered_length_unit_interval",
             {{"inner", to_json(Number(m.covered_inner))}, {"outer", to_json(Number(m.covered_outer))}}},
            {"measure",
             {{"lower", to_json(Number(m.lower))},
              {"upper", to_json(Number(m.upper))},
              {"tail_bound", to_json(Number(m.tail))},
              {"tail_diverges", m.tail_diverges}}},
            {"touching_points", tj},
            {"touching_points_in_unit_interval", in_unit},
            {"unconfirmed_candidates", cover.ambiguous_gaps().size()},
            {"empty", empty},
            {"empty_reason", params.is_empty() ? "gamma >= 1/2" : (empty ? "cover leaves only rational points" : "")}};
  if (csv_out) {
    std::ostringstream csv;
    write_cover_csv(cover, csv);
    *csv_out = csv.str();
  }
  return j;
}

inline Json cmd_theorem1(const Options& o) {
  long a = o.n, b = o.n;
  if (!o.range.empty()) std::tie(a, b) = parse_range(o.range);
  Json list = Json::array();
  bool all = true;
  for (long n = a; n <= b; ++n) {
    Theorem1Instance t = theorem1(n);
    all = all && t.certified();
    list.push_back(to_json(t));
  }
  return {{"command", "theorem1"}, {"instances", list}, {"all_certified", all}, {"count", list.size()}};
}

inline Json cmd_theorem2(const Options& o) {
  Number alpha = parse_number("--alpha", o.alpha);
  DiophParams params = parse_params(o.gamma, o.tau);
  Theorem2Options t2;
  t2.search = o.search;
  t2.search_options.Q = o.search_Q;
  t2.search_options.threads = o.threads;
  t2.max_precision = o.max_precision;
  Theorem2Instance t = theorem2_transform(alpha, params.gamma(), params.tau(), t2);
  Json j = to_json(t);
  j["command"] = "theorem2";
  return j;
}

inline Json cmd_certify(const Options& o) {
  Number xi = parse_number("--xi", o.xi);
  DiophParams params = parse_params(o.gamma, o.tau);
  Source l = parse_source("--left", o.left), r = parse_source("--right", o.right);
  Json j = to_json(certify_isolated(xi, params, l, r, o.max_precision));
  j["command"] = "certify";
  return j;
}

/// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Certified computations for the Diophantine sets D(gamma, tau)", "diophset"};
  app.fallthrough();
  app.require_subcommand(0, 1);  // unknown words then surface as extras
  app.set_config("--config", "", "key=value file overriding defaults");
  app.add_option("--format", o.format, "json | csv | human")->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("--output", o.output, "write the result here (atomically) instead of stdout");
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--max-precision", o.max_precision, "precision ceiling in bits")->check(CLI::Range(64u, 1u << 20));

  auto* member = app.add_subcommand("member", "decide xi in D(gamma, tau)");
  member->add_option("--xi", o.xi)->required();
  member->add_option("--gamma", o.gamma)->required();
  member->add_option("--tau", o.tau)->required();
  member->add_option("--oracle", o.oracle, "also scan the definition up to this q");

  auto* cover = app.add_subcommand("cover", "excluded-interval cover of [0,1] and measure bounds");
  cover->add_option("--gamma", o.gamma)->required();
  cover->add_option("--tau", o.tau)->required();
  cover->add_option("--Q", o.Q, "denominator cutoff");
  cover->add_option("--csv", o.csv_path, "also write the interval table here");

  auto* t1 = app.add_subcommand("theorem1", "isolated point (n + sqrt(n^2+4))/2 with certificate");
  auto* n_opt = t1->add_option("n", o.n);
  auto* range_opt = t1->add_option("--range", o.range, "a..b");
  n_opt->excludes(range_opt);
  t1->require_option(1);

  auto* t2 = app.add_subcommand("theorem2", "equivalent representative (m a + 1)/((2m+1) a + 2)");
  t2->add_option("--alpha", o.alpha)->required();
  t2->add_option("--gamma", o.gamma)->required();
  t2->add_option("--tau", o.tau)->required();
  t2->add_flag("--search", o.search, "search a default grid for isolating parameters");
  t2->add_option("--search-Q", o.search_Q, "cutoff used by the search");

  auto* cert = app.add_subcommand("certify", "check a two-interval isolation certificate");
  cert->add_option("--xi", o.xi)->required();
  cert->add_option("--gamma", o.gamma)->required();
  cert->add_option("--tau", o.tau)->required();
  cert->add_option("--left", o.left, "p/q whose interval ends at xi")->required();
  cert->add_option("--right", o.right, "p/q whose interval starts at xi")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitParse;
  }
  if (app.get_subcommands().empty()) {
    err << "usage error: expected a subcommand (member, cover, theorem1, theorem2, certify)\n";
    return kExitParse;
  }

  try {
    Json result;
    std::string csv;
    bool want_csv = cover->parsed() && (o.format == "csv" || !o.csv_path.empty());
    if (member->parsed()) result = cmd_member(o);
    if (cover->parsed()) result = cmd_cover(o, want_csv ? &csv : nullptr);
    if (t1->parsed()) result = cmd_theorem1(o);
    if (t2->parsed()) result = cmd_theorem2(o);
    if (cert->parsed()) result = cmd_certify(o);

    std::string text = (cover->parsed() && o.format == "csv") ? csv : render(result, o.format);
    if (!o.csv_path.empty()) write_atomic(o.csv_path, csv);
    if (o.output.empty()) {
      out << text;
    } else {
      write_atomic(o.output, text);
    }
    if (t1->parsed() && !result["all_certified"].get<bool>()) return kExitInternal;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    if (e.kind() == ErrorKind::kHypothesisViolation) return kExitHypothesis;
    if (e.kind() == ErrorKind::kParse) return kExitParse;
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace diophset::cli
