// hcps: command-line front end for the knowledge base, broker, simulator,
// allocation and metrics modules.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hcps/allocation.hpp"
#include "hcps/broker.hpp"
#include "hcps/error.hpp"
#include "hcps/mapek_sim.hpp"
#include "hcps/metrics.hpp"
#include "hcps/query.hpp"
#include "hcps/reasoner.hpp"
#include "hcps/registry.hpp"
#include "hcps/schema.hpp"

namespace {

using namespace hcps;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

KnowledgeBase load_kb(const std::string& path, bool with_base) {
  KnowledgeBase kb = with_base ? base_ontology() : KnowledgeBase{};
  parse_document_into(kb, read_file(path));
  return kb;
}

struct Options {
  bool quiet = false;
  bool with_base = false;
  std::string kb, query, request, scenario, trace_out, tasks, weights, annotations, cq_dir;
  bool reason_first = false;
};

void info(const Options& o, const std::string& line) {
  if (!o.quiet) std::cerr << line << "\n";
}

int cmd_validate(const Options& o) {
  const KnowledgeBase kb = load_kb(o.kb, o.with_base);
  const KnowledgeBase closed = materialize(kb);
  ConsistencyReport report = check_consistency(kb);
  if (!kb.annotations().empty()) report.ontoclean_violations = check_ontoclean(kb);
  info(o, std::to_string(kb.statements().size()) + " statements, " + std::to_string(closed.statements().size()) +
              " after materialization");
  if (report.consistent()) {
    std::cout << "consistent\n";
    return 0;
  }
  std::cout << report.str();
  return 1;
}

int cmd_query(const Options& o) {
  KnowledgeBase kb = load_kb(o.kb, o.with_base);
  if (o.reason_first) kb = materialize(kb);
  std::cout << evaluate(kb, read_file(o.query)).tsv();
  return 0;
}

int cmd_reason(const Options& o) {
  std::cout << serialize(materialize(load_kb(o.kb, o.with_base)));
  return 0;
}

int cmd_metrics(const Options& o) {
  const KnowledgeBase kb = load_kb(o.kb, o.with_base);
  std::optional<std::vector<MetaAnnotation>> annotations;
  if (!o.annotations.empty()) {
    KnowledgeBase metas;
    parse_document_into(metas, read_file(o.annotations));
    annotations.emplace();
    for (const auto& [cls, a] : metas.annotations()) annotations->push_back(a);
  }
  std::vector<CompetencyQuestion> cqs;
  if (!o.cq_dir.empty()) cqs = load_cq_dir(o.cq_dir);
  std::cout << eval_report(kb, annotations, cqs).str();
  return 0;
}

int cmd_discover(const Options& o) {
  Registry registry(materialize(load_kb(o.kb, o.with_base)));
  Broker broker(registry);
  const std::string spec = std::filesystem::is_regular_file(o.request) ? read_file(o.request) : o.request;
  const auto request = parse_request(registry.kb(), spec);
  info(o, "request: " + format_request(request));
  std::cout << "rank\tservice\tprovider\tscore\n";
  int rank = 0;
  for (const auto& c : broker.discover(request)) {
    auto provider = c.bindings.find("provider");
    std::cout << ++rank << '\t' << c.service.short_form() << '\t'
              << (provider == c.bindings.end() ? std::string("-") : to_string(provider->second)) << '\t'
              << format_fixed(c.score, 4) << '\n';
  }
  return 0;
}

int cmd_simulate(const Options& o) {
  const auto result = simulate(load_scenario_file(o.scenario));
  if (o.trace_out.empty()) {
    std::cout << result.trace.str();
  } else {
    std::ofstream out(o.trace_out);
    if (!out) throw Error(Errc::io, "cannot write " + o.trace_out);
    out << result.trace.str();
  }
  for (const auto& [text, ok] : result.expectations) std::cout << (ok ? "PASS " : "FAIL ") << text << "\n";
  info(o, std::to_string(result.trace.entries.size()) + " trace entries");
  return result.passed() ? 0 : 1;
}

int cmd_loa(const Options& o) {
  const auto tasks = parse_tasks(read_file(o.tasks));
  const CategoryWeights cw = o.weights.empty() ? CategoryWeights{} : parse_category_weights(o.weights);
  std::cout << "LoA\t" << format_fixed(loa(tasks), 4) << "\n";
  std::cout << "LoA_weighted\t" << format_fixed(loa_weighted(tasks, cw), 4) << "\n";
  if (!o.quiet) {
    std::cout << "task\tcategory\tassignee\trecommended\n";
    for (const auto& t : tasks)
      std::cout << t.id << '\t' << to_string(t.category) << '\t' << to_string(t.assignee) << '\t'
                << to_string(recommend_allocation(t.category)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcps: human-machine service provisioning toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("-q,--quiet", o.quiet, "suppress informational lines");

  auto kb_arg = [&](CLI::App* sub) {
    sub->add_option("kb", o.kb, "knowledge base file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--with-base", o.with_base, "load the base ontology before the file");
  };

  auto* validate = app.add_subcommand("validate", "parse, materialize and check consistency");
  kb_arg(validate);
  auto* query = app.add_subcommand("query", "evaluate a query, print TSV");
  kb_arg(query);
  query->add_option("query", o.query, "query file")->required()->check(CLI::ExistingFile);
  query->add_flag("--reason", o.reason_first, "materialize before evaluating");
  auto* reason = app.add_subcommand("reason", "print the materialized knowledge base");
  kb_arg(reason);
  auto* metrics = app.add_subcommand("metrics", "ontology evaluation report");
  kb_arg(metrics);
  metrics->add_option("--annotations", o.annotations, "META annotation file")->check(CLI::ExistingFile);
  metrics->add_option("--cq-dir", o.cq_dir, "directory with cq1.q ... cqN.q")->check(CLI::ExistingDirectory);
  auto* discover = app.add_subcommand("discover", "ranked candidates for a request, TSV");
  kb_arg(discover);
  discover->add_option("request", o.request, "request text or file (skill=... knowledge=a,b context=...)")
      ->required();
  auto* sim = app.add_subcommand("simulate", "run a scenario and check its EXPECT lines");
  sim->add_option("scenario", o.scenario, "scenario file")->required()->check(CLI::ExistingFile);
  sim->add_option("--trace", o.trace_out, "write the trace here instead of standard output");
  auto* loa_cmd = app.add_subcommand(
      "loa",
      "level of automation for a task list.\n"
      "Automation that is trusted too much invites complacency; too little and its benefit is lost.");
  loa_cmd->add_option("tasks", o.tasks, "task file")->required()->check(CLI::ExistingFile);
  loa_cmd->add_option("--category-weights", o.weights, "skill,rule,knowledge,expertise weights (default 1,2,3,4)");
  auto* export_base = app.add_subcommand("export-base", "write the base ontology to standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*query) return cmd_query(o);
    if (*reason) return cmd_reason(o);
    if (*metrics) return cmd_metrics(o);
    if (*discover) return cmd_discover(o);
    if (*sim) return cmd_simulate(o);
    if (*loa_cmd) return cmd_loa(o);
    if (*export_base) {
      std::cout << serialize(base_ontology());
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
