#include "forge/cli.hpp"

#include "forge/json_io.hpp"
#include "forge/parallel.hpp"
#include "forge/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace forge {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ForgeError("io_error", "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ForgeError("io_error", "cannot write " + path);
  f << text;
}

Json load_json(const std::string& path) {
  return Json::parse(slurp(path));
}

TheoryRef load_theory(const std::string& path, const std::string& catalog_name) {
  if (!catalog_name.empty()) return compile(catalog(catalog_name));
  Json j = load_json(path);
  if (j.contains("theory")) return theory_from_json(j.at("theory"));
  return theory_from_json(j);
}

std::vector<int> parse_tuple(const std::string& csv) {
  std::vector<int> out;
  if (csv.empty()) return out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"forge: compile finitely presented theories, run the interval "
               "construction, sample exchangeable structures, and check the "
               "closure diagnostics"};
  app.require_subcommand(1);

  // ---- compile ----
  auto* c_compile = app.add_subcommand("compile", "compile a theory source to one-point form");
  std::string in_file, cat_name, out_file;
  bool do_relationalize = false;
  c_compile->add_option("file", in_file, "theory DSL source file");
  c_compile->add_option("--catalog", cat_name, "built-in catalog entry instead of a file");
  c_compile->add_flag("--relationalize", do_relationalize,
                      "translate function/constant symbols to graph relations");
  c_compile->add_option("--out", out_file, "output path (default stdout)");

  // ---- check-sap ----
  auto* c_sap = app.add_subcommand("check-sap", "strong amalgamation over the age");
  std::string sap_theory, sap_cat, sap_out;
  int sap_bound = 4;
  c_sap->add_option("theory", sap_theory, "compiled theory JSON");
  c_sap->add_option("--catalog", sap_cat, "catalog entry");
  c_sap->add_option("--bound", sap_bound, "maximum structure size");
  c_sap->add_option("--out", sap_out, "output path");

  // ---- check-dup ----
  auto* c_dup = app.add_subcommand("check-dup", "duplication of quantifier-free types");
  std::string dup_theory, dup_cat, dup_out;
  int dup_width = 3;
  c_dup->add_option("theory", dup_theory, "compiled theory JSON");
  c_dup->add_option("--catalog", dup_cat, "catalog entry");
  c_dup->add_option("--width", dup_width, "maximum type width");
  c_dup->add_option("--out", dup_out, "output path");

  // ---- dcl / acl ----
  auto* c_dcl = app.add_subcommand("dcl", "definable closure of a tuple");
  std::string dcl_structure, dcl_tuple, dcl_out;
  c_dcl->add_option("structure", dcl_structure, "structure JSON")->required();
  c_dcl->add_option("--tuple", dcl_tuple, "comma-separated labels (may be empty)");
  c_dcl->add_option("--out", dcl_out, "output path");

  auto* c_acl = app.add_subcommand("acl", "algebraic closure orbit sizes");
  std::string acl_structure, acl_tuple, acl_out;
  int acl_threshold = 1;
  c_acl->add_option("structure", acl_structure, "structure JSON")->required();
  c_acl->add_option("--tuple", acl_tuple, "comma-separated labels");
  c_acl->add_option("--threshold", acl_threshold, "orbit size threshold t");
  c_acl->add_option("--out", acl_out, "output path");

  // ---- build ----
  auto* c_build = app.add_subcommand("build", "run the interval construction");
  std::string build_theory, build_cat, build_out;
  long build_stages = 40;
  c_build->add_option("theory", build_theory, "compiled theory JSON");
  c_build->add_option("--catalog", build_cat, "catalog entry");
  c_build->add_option("--stages", build_stages, "number of stages");
  c_build->add_option("--out", build_out, "output path");

  // ---- trace-dump ----
  auto* c_tdump = app.add_subcommand("trace-dump", "render a trace");
  std::string tdump_trace, tdump_out;
  bool tdump_svg = false;
  c_tdump->add_option("trace", tdump_trace, "trace JSON")->required();
  c_tdump->add_flag("--svg", tdump_svg, "emit a static SVG picture");
  c_tdump->add_option("--out", tdump_out, "output path");

  // ---- sample ----
  auto* c_sample = app.add_subcommand("sample", "draw finite structures");
  std::string sm_theory, sm_cat, sm_out, sm_measure = "cauchy";
  int sm_n = 30;
  long sm_draws = 1, sm_stages = 40;
  std::uint64_t sm_seed = 0;
  double sm_loc = 0.0, sm_scale = 1.0;
  int sm_bits = 96;
  c_sample->add_option("theory", sm_theory, "compiled theory JSON");
  c_sample->add_option("--catalog", sm_cat, "catalog entry");
  c_sample->add_option("-n", sm_n, "structure size");
  c_sample->add_option("--draws", sm_draws, "number of samples");
  c_sample->add_option("--seed", sm_seed, "root seed");
  c_sample->add_option("--measure", sm_measure, "cauchy or logistic");
  c_sample->add_option("--location", sm_loc, "measure location");
  c_sample->add_option("--scale", sm_scale, "measure scale");
  c_sample->add_option("--bits", sm_bits, "quantile precision bits");
  c_sample->add_option("--base-stages", sm_stages, "stages for the shared base trace");
  c_sample->add_option("--out", sm_out, "output path (jsonl)");

  // ---- graphon ----
  auto* c_graphon = app.add_subcommand("graphon", "step graphon export / sampling");
  auto* g_export = c_graphon->add_subcommand("export", "trace -> step graphon");
  std::string ge_trace, ge_out, ge_measure = "cauchy";
  double ge_loc = 0.0, ge_scale = 1.0;
  g_export->add_option("trace", ge_trace, "trace JSON")->required();
  g_export->add_option("--measure", ge_measure, "cauchy or logistic");
  g_export->add_option("--location", ge_loc, "measure location");
  g_export->add_option("--scale", ge_scale, "measure scale");
  g_export->add_option("--out", ge_out, "output path");
  auto* g_sample = c_graphon->add_subcommand("sample", "graphon -> random graphs");
  std::string gs_graphon, gs_out;
  int gs_n = 50;
  long gs_draws = 1;
  std::uint64_t gs_seed = 0;
  g_sample->add_option("graphon", gs_graphon, "graphon JSON")->required();
  g_sample->add_option("-n", gs_n, "vertex count");
  g_sample->add_option("--draws", gs_draws, "number of samples");
  g_sample->add_option("--seed", gs_seed, "root seed");
  g_sample->add_option("--out", gs_out, "output path (jsonl)");
  c_graphon->require_subcommand(1);

  // ---- compare ----
  auto* c_compare = app.add_subcommand(
      "compare", "total variation between theory sampler and graphon sampler");
  std::string cp_theory, cp_cat, cp_graphon, cp_out;
  int cp_n = 3;
  long cp_draws = 10000, cp_stages = 10;
  std::uint64_t cp_seed = 0;
  c_compare->add_option("theory", cp_theory, "compiled theory JSON");
  c_compare->add_option("--catalog", cp_cat, "catalog entry");
  c_compare->add_option("graphon", cp_graphon, "graphon JSON (default: export the trace)");
  c_compare->add_option("-n", cp_n, "structure size (<= 5)");
  c_compare->add_option("--draws", cp_draws, "draws per side");
  c_compare->add_option("--seed", cp_seed, "root seed");
  c_compare->add_option("--base-stages", cp_stages, "stages for the base trace");
  c_compare->add_option("--out", cp_out, "output path");

  // ---- verify ----
  auto* c_verify = app.add_subcommand("verify", "acceptance battery");
  std::string vf_suite = "full", vf_out, vf_junit;
  std::uint64_t vf_seed = 7;
  c_verify->add_option("--suite", vf_suite, "full or quick");
  c_verify->add_option("--seed", vf_seed, "root seed");
  c_verify->add_option("--out", vf_out, "report JSON path");
  c_verify->add_option("--junit", vf_junit, "JUnit-style XML path");

  std::vector<const char*> argv;
  std::string prog = "forge";
  argv.push_back(prog.c_str());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_compile) {
      if (in_file.empty() && cat_name.empty())
        throw ForgeError("usage", "compile needs a source file or --catalog");
      TheorySpec spec = cat_name.empty() ? parse_theory(slurp(in_file)) : catalog(cat_name);
      if (do_relationalize) spec = relationalize(spec);
      TheoryRef th = compile(spec);
      RunConfig cfg;
      cfg.command = "compile";
      Json j;
      j["run_config"] = to_json(cfg);
      j["theory"] = to_json(*th);
      spill(out_file, dump(j), out);
      return 0;
    }
    if (*c_sap) {
      TheoryRef th = load_theory(sap_theory, sap_cat);
      AmalgamReport rep = check_strong_amalgamation(AgeOracle(th), sap_bound);
      RunConfig cfg;
      cfg.command = "check-sap";
      cfg.bound = sap_bound;
      Json j;
      j["run_config"] = to_json(cfg);
      j["report"] = to_json(rep);
      spill(sap_out, dump(j), out);
      return rep.all_pass ? 0 : 1;
    }
    if (*c_dup) {
      TheoryRef th = load_theory(dup_theory, dup_cat);
      DuplicationReport rep = check_duplication(th, dup_width);
      RunConfig cfg;
      cfg.command = "check-dup";
      cfg.width = dup_width;
      Json j;
      j["run_config"] = to_json(cfg);
      j["report"] = to_json(rep);
      spill(dup_out, dump(j), out);
      return 0;
    }
    if (*c_dcl) {
      FiniteStructure s = structure_from_json(load_json(dcl_structure));
      auto tuple = parse_tuple(dcl_tuple);
      auto set = dcl(s, tuple);
      Json j;
      RunConfig cfg;
      cfg.command = "dcl";
      j["run_config"] = to_json(cfg);
      j["tuple"] = tuple;
      j["dcl"] = std::vector<int>(set.begin(), set.end());
      spill(dcl_out, dump(j), out);
      return 0;
    }
    if (*c_acl) {
      FiniteStructure s = structure_from_json(load_json(acl_structure));
      auto tuple = parse_tuple(acl_tuple);
      auto sizes = acl_orbit_sizes(s, tuple);
      auto below = acl_below(s, tuple, acl_threshold);
      Json j;
      RunConfig cfg;
      cfg.command = "acl";
      j["run_config"] = to_json(cfg);
      j["tuple"] = tuple;
      j["orbit_sizes"] = sizes;
      j["threshold"] = acl_threshold;
      j["acl"] = std::vector<int>(below.begin(), below.end());
      spill(acl_out, dump(j), out);
      return 0;
    }
    if (*c_build) {
      TheoryRef th = load_theory(build_theory, build_cat);
      ConstructionTrace tr = ConstructionTrace::run(th, build_stages);
      RunConfig cfg;
      cfg.command = "build";
      cfg.stages = build_stages;
      Json j;
      j["run_config"] = to_json(cfg);
      j["trace"] = to_json(tr);
      spill(build_out, dump(j), out);
      return 0;
    }
    if (*c_tdump) {
      Json j = load_json(tdump_trace);
      ConstructionTrace tr = trace_from_json(j.contains("trace") ? j.at("trace") : j);
      if (tdump_svg) {
        spill(tdump_out, trace_svg(tr), out);
      } else {
        std::ostringstream os;
        os << "stage " << tr.stage << ", " << tr.width() << " intervals\n";
        for (size_t k = 0; k < tr.order.size(); ++k)
          os << "  rank " << k << ": " << rational_str(tr.value[tr.order[k]]) << "\n";
        spill(tdump_out, os.str(), out);
      }
      return 0;
    }
    if (*c_sample) {
      TheoryRef th = load_theory(sm_theory, sm_cat);
      MeasureSpec m = MeasureSpec::parse(sm_measure, sm_loc, sm_scale, sm_bits);
      ConstructionTrace base = ConstructionTrace::run(th, sm_stages);
      RunConfig cfg;
      cfg.command = "sample";
      cfg.seed = sm_seed;
      cfg.stages = sm_stages;
      cfg.n = sm_n;
      cfg.draws = sm_draws;
      cfg.measure = sm_measure;
      cfg.location = sm_loc;
      cfg.scale = sm_scale;
      cfg.bits = sm_bits;
      std::vector<std::string> lines(sm_draws);
      parallel_for(sm_draws, [&](long d) {
        FiniteStructure s =
            sample_from_base(base, m, sm_n, Rng(sm_seed).child(static_cast<std::uint64_t>(d)).key);
        Json line;
        line["draw"] = d;
        line["run_config"] = to_json(cfg);
        line["structure"] = to_json(s);
        lines[d] = line.dump();
      });
      std::ostringstream os;
      for (const auto& l : lines) os << l << "\n";
      spill(sm_out, os.str(), out);
      return 0;
    }
    if (*g_export) {
      Json j = load_json(ge_trace);
      ConstructionTrace tr = trace_from_json(j.contains("trace") ? j.at("trace") : j);
      MeasureSpec m = MeasureSpec::parse(ge_measure, ge_loc, ge_scale);
      StepGraphon w = export_step_graphon(tr, m);
      RunConfig cfg;
      cfg.command = "graphon export";
      cfg.measure = ge_measure;
      cfg.location = ge_loc;
      cfg.scale = ge_scale;
      Json o;
      o["run_config"] = to_json(cfg);
      o["graphon"] = to_json(w);
      spill(ge_out, dump(o), out);
      return 0;
    }
    if (*g_sample) {
      Json j = load_json(gs_graphon);
      StepGraphon w = graphon_from_json(j.contains("graphon") ? j.at("graphon") : j);
      RunConfig cfg;
      cfg.command = "graphon sample";
      cfg.seed = gs_seed;
      cfg.n = gs_n;
      cfg.draws = gs_draws;
      std::ostringstream os;
      for (long d = 0; d < gs_draws; ++d) {
        FiniteStructure s = w_random(w, gs_n, Rng(gs_seed).child(static_cast<std::uint64_t>(d)));
        Json line;
        line["draw"] = d;
        line["run_config"] = to_json(cfg);
        line["structure"] = to_json(s);
        os << line.dump() << "\n";
      }
      spill(gs_out, os.str(), out);
      return 0;
    }
    if (*c_compare) {
      TheoryRef th = load_theory(cp_theory, cp_cat);
      MeasureSpec m = MeasureSpec::parse("cauchy");
      ConstructionTrace base = ConstructionTrace::run(th, cp_stages);
      StepGraphon w = cp_graphon.empty()
                          ? export_step_graphon(base, m)
                          : graphon_from_json(load_json(cp_graphon).contains("graphon")
                                                  ? load_json(cp_graphon).at("graphon")
                                                  : load_json(cp_graphon));
      GraphGen a = [&](Rng rng) {
        SampleBatch b = sample_points(m, cp_n, rng);
        for (const auto& p : b.points)
          if (!base.locate(p).interior()) throw FilteredDraw{};
        return induce(base, b.points, true);
      };
      GraphGen bgen = [&](Rng rng) {
        // condition on all labels landing in interior parts
        std::vector<int> part(cp_n);
        for (int i = 0; i < cp_n; ++i) {
          double u = rng.uniform(), acc = 0;
          int p = static_cast<int>(w.masses.size()) - 1;
          for (size_t k = 0; k < w.masses.size(); ++k) {
            acc += w.masses[k];
            if (u < acc) { p = static_cast<int>(k); break; }
          }
          if (p == 0 || p == static_cast<int>(w.masses.size()) - 1) throw FilteredDraw{};
          part[i] = p;
        }
        FiniteStructure g(Signature{{{"E", 2}}, {}}, cp_n);
        for (int i = 0; i < cp_n; ++i)
          for (int jx = i + 1; jx < cp_n; ++jx)
            if (rng.bernoulli(w.values[part[i]][part[jx]])) {
              g.tuples[0].insert({i, jx});
              g.tuples[0].insert({jx, i});
            }
        return g;
      };
      CompareReport rep = distribution_compare(a, bgen, cp_draws, Rng(cp_seed));
      RunConfig cfg;
      cfg.command = "compare";
      cfg.seed = cp_seed;
      cfg.n = cp_n;
      cfg.draws = cp_draws;
      cfg.stages = cp_stages;
      Json o;
      o["run_config"] = to_json(cfg);
      o["tv"] = rep.tv;
      o["kept_a"] = rep.kept_a;
      o["kept_b"] = rep.kept_b;
      spill(cp_out, dump(o), out);
      return 0;
    }
    if (*c_verify) {
      SuiteOptions opt;
      opt.quick = vf_suite == "quick";
      opt.seed = vf_seed;
      SuiteResult res = verify_suite(opt, &out);
      Json o;
      RunConfig cfg;
      cfg.command = "verify";
      cfg.seed = vf_seed;
      o["run_config"] = to_json(cfg);
      o["all_pass"] = res.all_pass;
      Json reports = Json::array();
      for (const auto& r : res.reports) reports.push_back(to_json(r));
      o["reports"] = std::move(reports);
      spill(vf_out, dump(o), out);
      if (!vf_junit.empty()) {
        std::ostringstream xs;
        xs << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<testsuite name=\"forge-verify\" tests=\""
           << res.reports.size() << "\">\n";
        for (const auto& r : res.reports) {
          xs << "  <testcase classname=\"" << r.theory_name << "\" name=\"" << r.test_name
             << "\"";
          if (r.passed())
            xs << "/>\n";
          else
            xs << "><failure message=\"" << r.verdict << " value=" << r.value
               << "\"/></testcase>\n";
        }
        xs << "</testsuite>\n";
        spill(vf_junit, xs.str(), out);
      }
      return res.all_pass ? 0 : 1;
    }
  } catch (const ForgeError& e) {
    Json j;
    j["error"] = e.code;
    j["message"] = e.what();
    err << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    Json j;
    j["error"] = "internal";
    j["message"] = e.what();
    err << j.dump() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace forge
