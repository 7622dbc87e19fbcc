#include "gustrata/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gustrata/errors.hpp"
#include "gustrata/serialize.hpp"
#include "gustrata/slopegraph.hpp"
#include "gustrata/strata.hpp"
#include "gustrata/version.hpp"

namespace gustrata::cli {

using nlohmann::json;
using zoo::DeformationConvention;

namespace {

class SpecParser {
 public:
  SpecParser(std::string text, witt::ContextPtr ctx, DeformationConvention convention)
      : ctx_(std::move(ctx)), convention_(convention) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) text_ += c;
    }
  }

  DieudonneDisplay parse() {
    DieudonneDisplay result = term();
    while (accept('+')) result = zoo::direct_sum(result, term());
    if (pos_ != text_.size()) fail("unexpected '" + text_.substr(pos_) + "'");
    return result;
  }

 private:
  DieudonneDisplay term() {
    DieudonneDisplay base = atom();
    if (!accept('^')) return base;
    const int r = number();
    if (r < 1) fail("exponent must be >= 1");
    DieudonneDisplay out = base;
    for (int i = 1; i < r; ++i) out = zoo::direct_sum(out, base);
    return out;
  }

  DieudonneDisplay atom() {
    if (accept_word("def(")) return deformation();
    if (accept_word("ss(")) {
      const int n = number();
      expect(')');
      return zoo::supersingular_module(ctx_, n);
    }
    if (accept_word("M(")) {
      const int m = number();
      expect(')');
      return zoo::module_M(ctx_, m);
    }
    if (accept('N')) return zoo::module_N(ctx_);
    fail("expected N, M(m), ss(n) or def(n; ...)");
  }

  DieudonneDisplay deformation() {
    const int n = number();
    if (n < 3) fail("def(n) needs n >= 3");
    zoo::DeformationPoint point = zoo::DeformationPoint::zero(ctx_, n);
    const auto indices = zoo::DeformationPoint::parameter_indices(n);
    if (accept(';')) {
      do {
        expect('s');
        const int index = number();
        expect('=');
        const std::int64_t value = number();
        const auto it = std::find(indices.begin(), indices.end(), index);
        if (it == indices.end()) fail("s" + std::to_string(index) + " is not a coordinate for n = " + std::to_string(n));
        if (value >= ctx_->residue_field_size()) fail("value " + std::to_string(value) + " outside the residue field");
        point.params[static_cast<std::size_t>(it - indices.begin())] = witt::FieldElement::from_index(ctx_, value);
      } while (accept(',') || accept(';'));
    }
    expect(')');
    return zoo::deformation_display(ctx_, point, convention_);
  }

  std::int64_t number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 12) fail("expected a number");
    return std::stoll(text_.substr(start, pos_ - start));
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_word(const std::string& word) {
    if (text_.compare(pos_, word.size(), word) == 0) {
      pos_ += word.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("module spec '" + text_ + "' at position " + std::to_string(pos_) + ": " + what);
  }

  std::string text_;
  std::size_t pos_ = 0;
  witt::ContextPtr ctx_;
  DeformationConvention convention_;
};

struct Options {
  int n = 3;
  std::int64_t p = 2;
  int d = 1;
  int precision = 0;
  std::string module;
  std::string format = "json";
  std::string convention = "polarized";
  bool exhaustive = false;
  std::int64_t random = 0;
  std::uint64_t seed = 0;
  std::int64_t budget = 1'000'000;
  unsigned threads = 0;
  bool dot = false;
};

DeformationConvention convention_of(const Options& o) {
  return o.convention == "printed" ? DeformationConvention::AsPrinted : DeformationConvention::Polarized;
}

json tool_json() { return {{"name", kToolName}, {"version", kVersion}}; }

std::string header_line(const witt::RingContext& ctx) {
  std::string modulus;
  for (auto c : ctx.defining_polynomial()) modulus += (modulus.empty() ? "" : ",") + std::to_string(c);
  return std::string(kToolName) + " " + kVersion + " p=" + std::to_string(ctx.prime()) +
         " d=" + std::to_string(ctx.degree()) + " N=" + std::to_string(ctx.precision()) + " modulus=[" + modulus + "]";
}

// The precision default 4 n d + 8 needs n = rank / 2, so the spec is built
// once at precision 1 to learn the rank.
DieudonneDisplay build_module(const Options& o, witt::ContextPtr& ctx) {
  if (o.module.empty()) throw InvalidArgument("--module is required");
  int precision = o.precision;
  if (precision <= 0) {
    const auto probe = witt::RingContext::make(o.p, o.d, 1);
    const auto rank = static_cast<int>(parse_module_spec(o.module, probe, convention_of(o)).rank());
    precision = zoo::default_precision(rank / 2, o.d);
  }
  ctx = witt::RingContext::make(o.p, o.d, precision);
  return parse_module_spec(o.module, ctx, convention_of(o));
}

json config_json(const Options& o, const std::string& command, int precision) {
  return {{"command", command}, {"n", o.n},           {"p", o.p},       {"d", o.d},
          {"precision", precision}, {"module", o.module}, {"format", o.format},
          {"convention", o.convention}, {"seed", o.seed}, {"budget", o.budget}};
}

int cmd_catalog(const Options& o, std::ostream& out) {
  const auto entries = strata::catalog(o.n);
  const int precision = o.precision > 0 ? o.precision : zoo::default_precision(o.n, o.d);
  const auto ctx = witt::RingContext::make(o.p, o.d, precision);
  bool all_match = true;
  json strata_json = json::array();
  std::ostringstream tsv;
  tsv << "# " << header_line(*ctx) << "\n";
  tsv << "label\tj\tlambda_min\tcodim\tm\tr\tpolygon\tcharpoly_match\n";
  for (const auto& e : entries) {
    const auto module = e.j ? zoo::expected_module(ctx, o.n, *e.j) : zoo::supersingular_module(ctx, o.n);
    const bool match = newton_slopes(module) == e.polygon;
    all_match = all_match && match;
    json entry = {{"label", e.label},
                  {"lambda_min", to_string(e.lambda_min)},
                  {"polygon", io::polygon_to_json(e.polygon)},
                  {"codim", e.codim},
                  {"decomposition", {{"m", e.m}, {"r", e.r}}},
                  {"charpoly_match", match}};
    entry["j"] = e.j ? json(*e.j) : json(nullptr);
    strata_json.push_back(entry);
    tsv << e.label << '\t' << (e.j ? std::to_string(*e.j) : "-") << '\t' << to_string(e.lambda_min) << '\t' << e.codim
        << '\t' << e.m << '\t' << e.r << '\t' << e.polygon.to_string() << '\t' << (match ? "yes" : "no") << '\n';
  }
  if (o.format == "tsv") {
    out << tsv.str();
  } else {
    out << json{{"tool", tool_json()},
                {"config", config_json(o, "catalog", ctx->precision())},
                {"context", io::context_to_json(*ctx)},
                {"n", o.n},
                {"count", entries.size()},
                {"strata", strata_json}}
               .dump(2)
        << '\n';
  }
  return all_match ? kOk : kVerificationFailed;
}

int cmd_slopes(const Options& o, std::ostream& out) {
  witt::ContextPtr ctx;
  const auto display = build_module(o, ctx);
  const auto polygon = newton_slopes(display);
  const int a = a_number(display);
  const int prank = p_rank(display);
  const auto sig = signature(display);
  if (o.format == "tsv") {
    out << "# " << header_line(*ctx) << "\n# module " << o.module << "\nslope\tmultiplicity\n";
    for (const auto& s : polygon.segments()) out << to_string(s.slope) << '\t' << s.multiplicity << '\n';
    out << "# a_number\t" << a << "\n# p_rank\t" << prank << "\n# signature\t" << sig.first << ',' << sig.second
        << '\n';
  } else {
    json j = io::polygon_to_json(polygon);
    j["tool"] = tool_json();
    j["config"] = config_json(o, "slopes", ctx->precision());
    j["context"] = io::context_to_json(*ctx);
    j["module"] = o.module;
    j["rank"] = display.rank();
    j["a_number"] = a;
    j["p_rank"] = prank;
    j["signature"] = {sig.first, sig.second};
    out << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_graph(const Options& o, std::ostream& out) {
  witt::ContextPtr ctx;
  const auto display = build_module(o, ctx);
  const auto g = graph::build_graph(display);
  if (o.dot || o.format == "dot") {
    out << "// " << header_line(*ctx) << "\n// module " << o.module << "\n" << graph::to_dot(g);
    return kOk;
  }
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"from", g.vertices()[e.from].name()}, {"to", g.vertices()[e.to].name()}, {"weight", e.weight}});
  }
  json vertices = json::array();
  for (const auto& v : g.vertices()) vertices.push_back(v.name());
  json j = {{"tool", tool_json()},   {"config", config_json(o, "graph", ctx->precision())}, {"context", io::context_to_json(*ctx)},
            {"module", o.module},    {"vertices", vertices},              {"edges", edges}};
  const BasisLabel u1{Family::U, 1};
  if (std::find(g.vertices().begin(), g.vertices().end(), u1) != g.vertices().end()) {
    const auto v = g.index_of(u1);
    const auto cycles = graph::cycles_through(g, v);
    j["cycles_through_u1"] = io::cycles_to_json(g, cycles);
    if (!cycles.empty()) j["min_cycle_slope"] = to_string(graph::min_cycle_slope(g, v));
  }
  if (const auto mean = graph::min_cycle_mean(g)) j["global_min_cycle_mean"] = to_string(*mean);
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  witt::ContextPtr ctx;
  const auto display = build_module(o, ctx);
  const auto report = validate_display(display);
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json violations = json::array();
  bool ok = report.ok();
  if (ok) {
    for (const auto& v : polarization_check(display)) {
      violations.push_back({{"i", display.basis[v.i].name()},
                            {"j", display.basis[v.j].name()},
                            {"discrepancy", io::scalar_to_json(v.discrepancy)}});
    }
    ok = violations.empty();
  }
  if (o.format == "tsv") {
    out << "# " << header_line(*ctx) << "\n# module " << o.module << "\ncheck\tpassed\tdetail\n";
    for (const auto& c : report.checks) out << c.name << '\t' << (c.passed ? "yes" : "no") << '\t' << c.detail << '\n';
    out << "polarization\t" << (violations.empty() ? "yes" : "no") << '\t' << violations.size() << " violations\n";
  } else {
    out << json{{"tool", tool_json()},
                {"config", config_json(o, "check", ctx->precision())},
                {"context", io::context_to_json(*ctx)},
                {"module", o.module},
                {"validation", checks},
                {"polarization_violations", violations},
                {"ok", ok}}
               .dump(2)
        << '\n';
  }
  return ok ? kOk : kVerificationFailed;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.exhaustive == (o.random > 0)) throw InvalidArgument("verify needs exactly one of --exhaustive or --random K");
  strata::VerifyConfig cfg;
  cfg.n = o.n;
  cfg.p = o.p;
  cfg.d = o.d;
  cfg.exhaustive = o.exhaustive;
  cfg.random_count = o.random;
  cfg.seed = o.seed;
  cfg.budget = o.budget;
  cfg.precision = o.precision;
  cfg.convention = convention_of(o);
  cfg.threads = o.threads;
  const auto report = strata::verify_local_strata(cfg);
  if (o.format == "tsv") {
    out << report.to_tsv();
  } else {
    json j = report.to_json();
    j["config"] = config_json(o, "verify", report.precision);
    out << j.dump(2) << '\n';
  }
  if (!report.precision_failures().empty() || !report.doubled_precision_mismatches().empty()) return kPrecisionFailure;
  return report.verified() ? kOk : kVerificationFailed;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  if (o.n % 2 != 0) throw InvalidArgument("calibrate needs even n");
  const auto rows = strata::calibrate_even_rule(o.n, o.p, o.d, convention_of(o));
  out << strata::calibration_tsv(rows);
  const auto frozen = strata::calibrated_even_rule(convention_of(o));
  for (const auto& r : rows) {
    if (r.rule == frozen && r.agree != r.total) return kVerificationFailed;
  }
  return kOk;
}

}  // namespace

DieudonneDisplay parse_module_spec(const std::string& spec, const witt::ContextPtr& ctx,
                                   DeformationConvention convention) {
  return SpecParser(spec, ctx, convention).parse();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Newton strata of GU(1, n-1) Dieudonne displays"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("GUSTRATA_BUDGET")) {
    try {
      o.budget = std::stoll(env);
    } catch (const std::exception&) {
      err << "GUSTRATA_BUDGET is not an integer\n";
      return kUsageError;
    }
  }

  auto add_ring = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "prime")->capture_default_str();
    sub->add_option("--d", o.d, "residue field degree")->capture_default_str();
    sub->add_option("--precision", o.precision, "p-adic precision N (default 4 n d + 8)");
  };
  auto add_format = [&](CLI::App* sub, std::vector<std::string> formats) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
  };
  auto add_convention = [&](CLI::App* sub) {
    sub->add_option("--convention", o.convention, "deformation display relations: polarized or printed")
        ->check(CLI::IsMember({"polarized", "printed"}))
        ->capture_default_str();
  };

  auto* catalog = app.add_subcommand("catalog", "admissible Newton polygons for GU(1, n-1)");
  catalog->add_option("--n", o.n, "n >= 3")->required();
  add_ring(catalog);
  add_format(catalog, {"json", "tsv"});

  auto* slopes = app.add_subcommand("slopes", "Newton polygon, a-number, p-rank and signature of a module");
  slopes->add_option("--module", o.module, "module spec, e.g. \"M(4)+N\" or \"def(5; s4=1)\"")->required();
  add_ring(slopes);
  add_format(slopes, {"json", "tsv"});
  add_convention(slopes);

  auto* graph_cmd = app.add_subcommand("graph", "slope graph of a module");
  graph_cmd->add_option("--module", o.module, "module spec")->required();
  graph_cmd->add_flag("--dot", o.dot, "emit Graphviz DOT");
  add_ring(graph_cmd);
  add_format(graph_cmd, {"json", "dot"});
  add_convention(graph_cmd);

  auto* check = app.add_subcommand("check", "display axioms and the polarization identity");
  check->add_option("--module", o.module, "module spec")->required();
  add_ring(check);
  add_format(check, {"json", "tsv"});
  add_convention(check);

  auto* verify = app.add_subcommand("verify", "sweep deformation points and compare strata");
  verify->add_option("--n", o.n, "n >= 3")->required();
  add_ring(verify);
  verify->add_flag("--exhaustive", o.exhaustive, "every point over F_{p^d}");
  verify->add_option("--random", o.random, "number of random points");
  verify->add_option("--seed", o.seed, "random seed")->capture_default_str();
  verify->add_option("--budget", o.budget, "maximum number of points (env GUSTRATA_BUDGET)");
  verify->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  add_format(verify, {"json", "tsv"});
  add_convention(verify);

  auto* calibrate = app.add_subcommand("calibrate", "agreement of candidate even-n stratum rules");
  calibrate->add_option("--n", o.n, "even n >= 4")->required();
  add_ring(calibrate);
  add_convention(calibrate);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*catalog) return cmd_catalog(o, out);
    if (*slopes) return cmd_slopes(o, out);
    if (*graph_cmd) return cmd_graph(o, out);
    if (*check) return cmd_check(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*calibrate) return cmd_calibrate(o, out);
  } catch (const PrecisionError& e) {
    err << "precision failure: " << e.what() << '\n';
    return kPrecisionFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace gustrata::cli
