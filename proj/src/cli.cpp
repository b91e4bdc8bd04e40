#include "npr/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "npr/maxent.hpp"
#include "npr/spmci.hpp"

namespace npr::cli {

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string render_query(const Query& q) {
  std::string s = "P(" + render(q.target);
  if (!q.given.is_true()) s += " | " + render(q.given);
  s += ")";
  return s;
}

struct Options {
  std::string command;
  std::string file;
  std::vector<std::string> queries;
  bool json = false;
  bool explain = false;
  bool ci_rep = false;
  bool compare_spmci = false;
  int atom_cap = kDefaultAtomCap;
  double me_tol = kTolME;
  int me_max_iter = kMaxIterME;
};

Options parse_args(const std::vector<std::string>& args) {
  Options o;
  if (const char* env = std::getenv("NPR_ATOM_CAP")) o.atom_cap = std::atoi(env);
  size_t i = 0;
  if (i < args.size()) o.command = args[i++];
  auto need_value = [&](const std::string& flag) -> std::string {
    if (i >= args.size()) throw UsageError("missing value for " + flag);
    return args[i++];
  };
  while (i < args.size()) {
    std::string a = args[i++];
    if (a == "--query") {
      o.queries.push_back(need_value(a));
    } else if (a == "--json") {
      o.json = true;
    } else if (a == "--explain") {
      o.explain = true;
    } else if (a == "--ci-report") {
      o.ci_rep = true;
    } else if (a == "--compare-spmci") {
      o.compare_spmci = true;
    } else if (a == "--atom-cap") {
      o.atom_cap = std::atoi(need_value(a).c_str());
    } else if (a == "--tol") {
      double v = std::atof(need_value(a).c_str());
      if (o.command == "maxent")
        o.me_tol = v;
      else
        set_tolerance(v);
    } else if (a == "--max-iter") {
      o.me_max_iter = std::atoi(need_value(a).c_str());
    } else if (!a.empty() && a[0] == '-') {
      throw UsageError("unknown flag: " + a);
    } else if (o.file.empty()) {
      o.file = a;
    } else {
      throw UsageError("unexpected argument: " + a);
    }
  }
  if (o.command.empty()) throw UsageError("no subcommand given");
  if (o.file.empty()) throw UsageError("no knowledge-base file given");
  return o;
}

std::vector<Query> resolve_queries(const Options& o, const KnowledgeBase& kb) {
  std::vector<Query> qs;
  for (const auto& text : o.queries) qs.push_back(parse_query(text, kb.atoms));
  if (qs.empty()) qs = kb.queries;
  if (qs.empty()) throw UsageError("no query given (use --query or a 'query' statement)");
  return qs;
}

int cmd_check(const Options& o, const KnowledgeBase& kb, std::ostream& out) {
  WorldTable t(kb.atoms, o.atom_cap);
  ConstraintSet cs = assemble(kb, t);
  bool ok = consistent(cs);
  if (o.json)
    out << "{\"status\":\"" << (ok ? "CONSISTENT" : "INCONSISTENT")
        << "\",\"atoms\":" << kb.atoms.size()
        << ",\"constraints\":" << kb.hard.size() << "}\n";
  else
    out << (ok ? "CONSISTENT" : "INCONSISTENT") << "\n";
  return ok ? kOk : kInconsistent;
}

int cmd_entail(const Options& o, const KnowledgeBase& kb, std::ostream& out) {
  WorldTable t(kb.atoms, o.atom_cap);
  ConstraintSet cs = assemble(kb, t);
  if (!consistent(cs)) {
    out << (o.json ? "{\"status\":\"INCONSISTENT\"}\n" : "INCONSISTENT\n");
    return kInconsistent;
  }
  int code = kOk;
  for (const auto& q : resolve_queries(o, kb)) {
    Bound b = bound(cs, Conditional{q.target, q.given});
    if (o.json) {
      out << "{\"query\":\"" << json_escape(render_query(q))
          << "\",\"mode\":\"entail\",\"defined\":" << (b.defined ? "true" : "false");
      if (b.defined)
        out << ",\"lower\":" << format_real(b.lower)
            << ",\"upper\":" << format_real(b.upper);
      out << "}\n";
    } else if (b.defined) {
      out << render_query(q) << " in [" << format_real(b.lower) << ", "
          << format_real(b.upper) << "]\n";
    } else {
      out << render_query(q) << " undefined\n";
    }
    if (!b.defined) code = kUndefined;
  }
  return code;
}

int cmd_spmci(const Options& o, const KnowledgeBase& kb, std::ostream& out) {
  WorldTable t(kb.atoms, o.atom_cap);
  int code = kOk;
  for (const auto& q : resolve_queries(o, kb)) {
    auto [b, ext] = spmci_bound(kb, Conditional{q.target, q.given}, t);
    if (o.json) {
      out << "{\"query\":\"" << json_escape(render_query(q))
          << "\",\"mode\":\"spmci\",\"defined\":" << (b.defined ? "true" : "false");
      if (b.defined)
        out << ",\"lower\":" << format_real(b.lower)
            << ",\"upper\":" << format_real(b.upper);
      out << ",\"adopted\":[";
      for (size_t i = 0; i < ext.adopted.size(); ++i)
        out << (i ? "," : "") << '"'
            << json_escape(ext.adopted[i].tuple.key()) << '"';
      out << "],\"blocked\":[";
      for (size_t i = 0; i < ext.blocked.size(); ++i) {
        const auto& [cd, reason] = ext.blocked[i];
        const char* r = reason == BlockReason::NotLinearizable ? "NOT_LINEARIZABLE"
                        : reason == BlockReason::Infeasible    ? "INFEASIBLE"
                        : reason == BlockReason::ForcedVacuous ? "FORCED_VACUOUS"
                                                               : "USER_EXCLUDED";
        out << (i ? "," : "") << "{\"tuple\":\"" << json_escape(cd.tuple.key())
            << "\",\"reason\":\"" << r << "\"}";
      }
      out << "],\"audit\":[";
      for (size_t i = 0; i < ext.order_audit.size(); ++i)
        out << (i ? "," : "") << '"' << json_escape(ext.order_audit[i]) << '"';
      out << "]}\n";
    } else {
      if (b.defined)
        out << render_query(q) << " in [" << format_real(b.lower) << ", "
            << format_real(b.upper) << "]\n";
      else
        out << render_query(q) << " undefined\n";
      if (o.explain) {
        out << render_trace(ext);
        for (const auto& a : ext.order_audit) out << "WARN  " << a << "\n";
      }
    }
    if (!b.defined) code = kUndefined;
  }
  return code;
}

int cmd_maxent(const Options& o, const KnowledgeBase& kb, std::ostream& out) {
  WorldTable t(kb.atoms, o.atom_cap);
  ConstraintSet cs = assemble(kb, t);
  MEResult me = max_entropy(cs, nullptr, o.me_tol, o.me_max_iter);
  if (me.status == MEStatus::Infeasible) {
    out << (o.json ? "{\"mode\":\"maxent\",\"status\":\"INFEASIBLE\"}\n"
                   : "INCONSISTENT\n");
    return kInconsistent;
  }
  const char* status = me.status == MEStatus::OK ? "OK" : "NOT_CONVERGED";

  std::vector<Query> qs;
  if (!o.queries.empty() || !kb.queries.empty()) {
    for (const auto& text : o.queries) qs.push_back(parse_query(text, kb.atoms));
    if (qs.empty()) qs = kb.queries;
  }

  int code = me.status == MEStatus::OK ? kOk : kNumericFailure;
  if (o.json) {
    out << "{\"mode\":\"maxent\",\"status\":\"" << status
        << "\",\"entropy\":" << format_real(me.entropy)
        << ",\"iterations\":" << me.iterations << ",\"dist\":[";
    for (size_t w = 0; w < me.dist.p.size(); ++w)
      out << (w ? "," : "") << format_real(me.dist.p[w]);
    out << "]";
    if (!qs.empty()) {
      out << ",\"queries\":[";
      for (size_t i = 0; i < qs.size(); ++i) {
        auto v = me_query(me.dist, Conditional{qs[i].target, qs[i].given}, t);
        out << (i ? "," : "") << "{\"query\":\""
            << json_escape(render_query(qs[i])) << "\",\"defined\":"
            << (v ? "true" : "false");
        if (v) out << ",\"value\":" << format_real(*v);
        out << "}";
        if (!v && code == kOk) code = kUndefined;
      }
      out << "]";
    }
    if (o.ci_rep) {
      auto rep = ci_report(me.dist, kb.defaults, t, tolerance());
      out << ",\"ci_report\":[";
      for (size_t i = 0; i < rep.size(); ++i) {
        out << (i ? "," : "") << "{\"tuple\":\"" << json_escape(rep[i].tuple.key())
            << "\",\"holds\":" << (rep[i].holds ? "true" : "false");
        if (rep[i].discrepancy)
          out << ",\"discrepancy\":" << format_real(*rep[i].discrepancy);
        out << "}";
      }
      out << "]";
    }
    out << "}\n";
  } else {
    out << "status " << status << "\n";
    out << "entropy " << format_real(me.entropy) << "\n";
    for (size_t w = 0; w < me.dist.p.size(); ++w)
      out << "p[" << w << "] = " << format_real(me.dist.p[w]) << "\n";
    for (const auto& q : qs) {
      auto v = me_query(me.dist, Conditional{q.target, q.given}, t);
      if (v)
        out << render_query(q) << " = " << format_real(*v) << "\n";
      else
        out << render_query(q) << " undefined\n";
      if (!v && code == kOk) code = kUndefined;
    }
    if (o.ci_rep) {
      auto rep = ci_report(me.dist, kb.defaults, t, tolerance());
      for (const auto& e : rep) {
        out << "ci " << e.tuple.key() << " "
            << (e.holds ? "holds" : "does not hold");
        if (e.discrepancy)
          out << " discrepancy " << format_real(*e.discrepancy);
        out << "\n";
      }
    }
    if (o.compare_spmci) {
      for (const auto& q : qs) {
        auto v = me_query(me.dist, Conditional{q.target, q.given}, t);
        auto [sb, ext] = spmci_bound(kb, Conditional{q.target, q.given}, t);
        out << "spmci-compare " << render_query(q) << " me=";
        out << (v ? format_real(*v) : "undefined");
        out << " spmci=";
        if (sb.defined)
          out << "[" << format_real(sb.lower) << "," << format_real(sb.upper)
              << "]";
        else
          out << "undefined";
        bool agree = v && sb.defined && *v >= sb.lower - tolerance() &&
                     *v <= sb.upper + tolerance();
        out << " agree=" << (agree ? "yes" : "no");
        if (v && sb.defined) {
          double mid = 0.5 * (sb.lower + sb.upper);
          out << " discrepancy=" << format_real(std::fabs(*v - mid));
        }
        out << "\n";
      }
    }
  }
  return code;
}

int cmd_worlds(const Options& o, const KnowledgeBase& kb, std::ostream& out) {
  WorldTable t(kb.atoms, o.atom_cap);
  std::vector<WorldSet> marks;
  for (const auto& q : kb.queries)
    marks.push_back(satisfying_set(Sentence::conj(q.target, q.given), t));
  for (size_t w = 0; w < t.world_count(); ++w) {
    out << w << '\t';
    for (int i = 0; i < t.atom_count(); ++i)
      out << (t.atom_true_in(w, i) ? '1' : '0');
    out << '\t';
    for (const auto& m : marks) out << (m.test(w) ? '1' : '0');
    out << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    Options o = parse_args(args);
    KnowledgeBase kb = parse_kb(read_file(o.file));
    if (o.command == "check") return cmd_check(o, kb, out);
    if (o.command == "entail") return cmd_entail(o, kb, out);
    if (o.command == "spmci") return cmd_spmci(o, kb, out);
    if (o.command == "maxent") return cmd_maxent(o, kb, out);
    if (o.command == "worlds") return cmd_worlds(o, kb, out);
    throw UsageError("unknown subcommand: " + o.command);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kParseError;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return kParseError;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kParseError;
  } catch (const CapExceeded& e) {
    err << e.what() << "\n";
    return kParseError;
  } catch (const InconsistentBase& e) {
    err << e.what() << "\n";
    return kInconsistent;
  } catch (const lp::NumericFailure& e) {
    err << e.what() << "\n";
    return kNumericFailure;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace npr::cli
