#include "forge/json_io.hpp"

#include <sstream>

namespace forge {

Json to_json(const RunConfig& c) {
  Json j;
  j["tool"] = kToolVersion;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["stages"] = c.stages;
  j["n"] = c.n;
  j["draws"] = c.draws;
  j["measure"] = c.measure;
  j["location"] = c.location;
  j["scale"] = c.scale;
  j["bits"] = c.bits;
  j["bound"] = c.bound;
  j["width"] = c.width;
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig c;
  c.command = j.value("command", "");
  c.seed = j.value("seed", std::uint64_t{0});
  c.stages = j.value("stages", 40L);
  c.n = j.value("n", 0);
  c.draws = j.value("draws", 0L);
  c.measure = j.value("measure", "cauchy");
  c.location = j.value("location", 0.0);
  c.scale = j.value("scale", 1.0);
  c.bits = j.value("bits", 96);
  c.bound = j.value("bound", 4);
  c.width = j.value("width", 3);
  return c;
}

Json to_json(const Signature& sig) {
  Json j;
  j["relations"] = Json::array();
  for (const auto& r : sig.relations)
    j["relations"].push_back(Json{{"name", r.name}, {"arity", r.arity}});
  if (!sig.functions.empty()) {
    j["functions"] = Json::array();
    for (const auto& f : sig.functions)
      j["functions"].push_back(Json{{"name", f.name}, {"arity", f.arity}});
  }
  return j;
}

Signature signature_from_json(const Json& j) {
  Signature sig;
  for (const auto& r : j.at("relations"))
    sig.relations.push_back({r.at("name").get<std::string>(), r.at("arity").get<int>()});
  if (j.contains("functions"))
    for (const auto& f : j.at("functions"))
      sig.functions.push_back({f.at("name").get<std::string>(), f.at("arity").get<int>()});
  sig.validate();
  return sig;
}

Json to_json(const FiniteStructure& s) {
  Json j;
  j["signature"] = to_json(s.sig);
  j["size"] = s.size;
  Json rels = Json::object();
  for (size_t r = 0; r < s.sig.relations.size(); ++r) {
    Json tuples = Json::array();
    for (const auto& t : s.tuples[r]) tuples.push_back(t);
    rels[s.sig.relations[r].name] = std::move(tuples);
  }
  j["relations"] = std::move(rels);
  return j;
}

FiniteStructure structure_from_json(const Json& j) {
  FiniteStructure s(signature_from_json(j.at("signature")), j.at("size").get<int>());
  const Json& rels = j.at("relations");
  for (size_t r = 0; r < s.sig.relations.size(); ++r) {
    const std::string& name = s.sig.relations[r].name;
    if (!rels.contains(name)) continue;
    for (const auto& t : rels.at(name)) {
      std::vector<int> tuple = t.get<std::vector<int>>();
      s.set(static_cast<int>(r), std::move(tuple), true);
    }
  }
  return s;
}

Json to_json(const QfFormula& f) {
  Json j;
  j["width"] = f.width;
  if (!f.var_names.empty()) j["vars"] = f.var_names;
  Json ds = Json::array();
  for (const auto& d : f.disjuncts) {
    Json lits = Json::array();
    for (const auto& l : d)
      lits.push_back(Json{{"rel", l.rel}, {"vars", l.vars}, {"positive", l.positive}});
    ds.push_back(std::move(lits));
  }
  j["disjuncts"] = std::move(ds);
  return j;
}

QfFormula qf_formula_from_json(const Json& j) {
  QfFormula f;
  f.width = j.at("width").get<int>();
  if (j.contains("vars")) f.var_names = j.at("vars").get<std::vector<std::string>>();
  for (const auto& d : j.at("disjuncts")) {
    std::vector<Literal> lits;
    for (const auto& l : d) {
      Literal lit;
      lit.rel = l.at("rel").get<int>();
      lit.vars = l.at("vars").get<std::vector<int>>();
      lit.positive = l.at("positive").get<bool>();
      lits.push_back(std::move(lit));
    }
    f.disjuncts.push_back(std::move(lits));
  }
  return f;
}

Json to_json(const CompiledTheory& th) {
  Json j;
  j["name"] = th.name;
  j["signature"] = to_json(th.sig);
  Json us = Json::array();
  for (const auto& u : th.universals) us.push_back(to_json(u));
  j["universals"] = std::move(us);
  Json axs = Json::array();
  for (const auto& ax : th.axioms)
    axs.push_back(Json{{"premise_width", ax.premise_width},
                       {"matrix", to_json(ax.matrix)},
                       {"source", ax.source},
                       {"dummy", ax.dummy}});
  j["axioms"] = std::move(axs);
  return j;
}

TheoryRef theory_from_json(const Json& j) {
  CompiledTheory th;
  th.name = j.at("name").get<std::string>();
  th.sig = signature_from_json(j.at("signature"));
  for (const auto& u : j.at("universals")) th.universals.push_back(qf_formula_from_json(u));
  for (const auto& a : j.at("axioms")) {
    OnePointAxiom ax;
    ax.premise_width = a.at("premise_width").get<int>();
    ax.matrix = qf_formula_from_json(a.at("matrix"));
    ax.source = a.at("source").get<std::string>();
    ax.dummy = a.at("dummy").get<bool>();
    th.axioms.push_back(std::move(ax));
  }
  th.finalize();
  return std::make_shared<const CompiledTheory>(std::move(th));
}

Json to_json(const ConstructionTrace& tr) {
  Json j;
  j["theory"] = to_json(*tr.theory);
  j["stage"] = tr.stage;
  j["rational_cursor"] = tr.rational_cursor;
  j["cw_state"] = rational_str(tr.cw_state);
  j["axiom_cursor"] = tr.axiom_cursor;
  Json rats = Json::array();
  for (int id : tr.order) rats.push_back(rational_str(tr.value[id]));
  j["rationals"] = std::move(rats);
  Json bds = Json::array();
  for (const auto& b : tr.bounds)
    bds.push_back(Json::array({rational_str(b.a), rational_str(b.b)}));
  j["boundaries"] = std::move(bds);
  // complete type over rank indices: only the holding tuples are stored
  Json atoms = Json::object();
  int w = tr.width();
  for (size_t r = 0; r < tr.theory->sig.relations.size(); ++r) {
    Json list = Json::array();
    int ar = tr.theory->sig.relations[r].arity;
    std::vector<int> t(ar, 0), ids(ar);
    if (w > 0) {
      while (true) {
        for (int k = 0; k < ar; ++k) ids[k] = tr.order[t[k]];
        if (tr.type.get(static_cast<int>(r), ids) == Tri::True) list.push_back(t);
        int k = ar - 1;
        while (k >= 0 && ++t[k] == w) t[k--] = 0;
        if (k < 0) break;
      }
    }
    atoms[tr.theory->sig.relations[r].name] = std::move(list);
  }
  j["atoms"] = std::move(atoms);
  Json wl = Json::array();
  for (const auto& rec : tr.witness_log) {
    std::vector<int> tuple_ranks;
    for (int id : rec.tuple_ids) tuple_ranks.push_back(tr.rank_of(id));
    wl.push_back(Json{{"stage", rec.stage},
                      {"axiom", rec.axiom_source},
                      {"tuple_ranks", tuple_ranks},
                      {"witness_rank", tr.rank_of(rec.witness_id)}});
  }
  j["witness_log"] = std::move(wl);
  return j;
}

ConstructionTrace trace_from_json(const Json& j) {
  ConstructionTrace tr;
  tr.theory = theory_from_json(j.at("theory"));
  tr.stage = j.at("stage").get<long>();
  tr.rational_cursor = j.at("rational_cursor").get<std::uint64_t>();
  tr.cw_state = parse_rational(j.at("cw_state").get<std::string>());
  tr.axiom_cursor = j.at("axiom_cursor").get<size_t>();
  const Json& rats = j.at("rationals");
  int w = static_cast<int>(rats.size());
  tr.type.init(tr.theory->sig);
  tr.type.reserve_positions(w);
  for (int i = 0; i < w; ++i) tr.type.add_position();
  for (int i = 0; i < w; ++i) {
    tr.value.push_back(parse_rational(rats[i].get<std::string>()));
    tr.order.push_back(i);  // load relabels positions by rank
  }
  for (const auto& b : j.at("boundaries"))
    tr.bounds.push_back(Quad{parse_rational(b[0].get<std::string>()),
                             parse_rational(b[1].get<std::string>())});
  // default everything to false, then set the stored holding tuples
  for (size_t r = 0; r < tr.theory->sig.relations.size(); ++r) {
    int ar = tr.theory->sig.relations[r].arity;
    std::vector<int> t(ar, 0);
    if (w > 0) {
      while (true) {
        tr.type.set(static_cast<int>(r), t, Tri::False);
        int k = ar - 1;
        while (k >= 0 && ++t[k] == w) t[k--] = 0;
        if (k < 0) break;
      }
    }
    for (const auto& t2 : j.at("atoms").at(tr.theory->sig.relations[r].name))
      tr.type.set(static_cast<int>(r), t2.get<std::vector<int>>(), Tri::True);
  }
  for (const auto& rec : j.value("witness_log", Json::array())) {
    WitnessRecord wr;
    wr.stage = rec.at("stage").get<long>();
    wr.axiom_source = rec.at("axiom").get<std::string>();
    for (int rank : rec.at("tuple_ranks").get<std::vector<int>>())
      wr.tuple_ids.push_back(rank);  // ids coincide with ranks after load
    wr.witness_id = rec.at("witness_rank").get<int>();
    tr.witness_log.push_back(std::move(wr));
  }
  return tr;
}

Json to_json(const StepGraphon& w) {
  Json j;
  j["masses"] = w.masses;
  j["values"] = w.values;
  j["random_free"] = w.random_free;
  j["unresolved_mass"] = w.unresolved_mass;
  return j;
}

StepGraphon graphon_from_json(const Json& j) {
  StepGraphon w;
  w.masses = j.at("masses").get<std::vector<double>>();
  w.values = j.at("values").get<std::vector<std::vector<double>>>();
  w.random_free = j.at("random_free").get<bool>();
  w.unresolved_mass = j.value("unresolved_mass", 0.0);
  w.validate();
  return w;
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["theory"] = r.theory_name;
  j["test"] = r.test_name;
  j["draws"] = r.draws;
  j["statistic"] = r.statistic;
  j["value"] = r.value;
  j["threshold"] = r.threshold;
  j["verdict"] = r.verdict;
  j["seed"] = r.seed;
  Json m = Json::object();
  for (const auto& [k, v] : r.metrics) m[k] = v;
  j["metrics"] = std::move(m);
  j["notes"] = r.notes;
  return j;
}

Json to_json(const AmalgamReport& r) {
  Json j;
  j["size_bound"] = r.size_bound;
  j["pairs_tested"] = r.pairs_tested;
  j["all_pass"] = r.all_pass;
  Json fails = Json::array();
  for (const auto& f : r.failures)
    fails.push_back(Json{{"a", to_json(f.a)},
                         {"b", to_json(f.b)},
                         {"c", to_json(f.c)},
                         {"emb_ab", f.emb_ab},
                         {"emb_ac", f.emb_ac}});
  j["failures"] = std::move(fails);
  return j;
}

Json to_json(const DuplicationReport& r) {
  Json j;
  j["width_bound"] = r.width_bound;
  j["types_tested"] = r.types_tested;
  j["pass"] = r.pass;
  if (r.counterexample) {
    Json ce;
    ce["structure"] = to_json(structure_of_type(*r.counterexample));
    ce["duplicated_position"] = r.counterexample_position;
    j["counterexample"] = std::move(ce);
  }
  return j;
}

std::string trace_svg(const ConstructionTrace& tr) {
  double lo = tr.bounds.front().approx(), hi = tr.bounds.back().approx();
  double pad = (hi - lo) * 0.08 + 0.5;
  lo -= pad;
  hi += pad;
  const int width_px = 960, height_px = 160;
  auto x_of = [&](double v) { return (v - lo) / (hi - lo) * (width_px - 40) + 20; };
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width_px << "' height='"
     << height_px << "'>\n";
  os << "<line x1='20' y1='80' x2='" << (width_px - 20)
     << "' y2='80' stroke='black' stroke-width='1'/>\n";
  for (const auto& b : tr.bounds) {
    double x = x_of(b.approx());
    os << "<line x1='" << x << "' y1='55' x2='" << x
       << "' y2='105' stroke='steelblue' stroke-width='1' stroke-dasharray='3,2'/>\n";
  }
  for (size_t jx = 0; jx < tr.order.size(); ++jx) {
    double x = x_of(tr.value[tr.order[jx]].convert_to<double>());
    os << "<circle cx='" << x << "' cy='80' r='2.5' fill='crimson'/>\n";
    os << "<text x='" << x << "' y='125' font-size='9' text-anchor='middle'>"
       << rational_str(tr.value[tr.order[jx]]) << "</text>\n";
  }
  os << "<text x='20' y='20' font-size='12'>stage " << tr.stage << ", "
     << tr.order.size() << " intervals (" << tr.theory->name << ")</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace forge
