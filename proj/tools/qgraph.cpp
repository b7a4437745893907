#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qg/analysis.hpp"

using namespace qg;

namespace {

std::string iso_timestamp() {
  std::time_t t;
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH"))
    t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
  else
    t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Input {
  ExtendedGraph graph;
  std::string hash;  // fingerprint of the canonical JSON form
  std::string origin;
};

ExtendedGraph builtin_graph(const std::string& name) {
  D4Example ex = builtin_d4_example();
  if (name == "d4-parent") return ex.parent;
  ExtendedGraph bare(ex.parent.graph());
  if (name == "d4-r1") return quotient(bare, ex.action, ex.rep1).quotient;
  if (name == "d4-r2") return quotient(bare, ex.action, ex.rep2).quotient;
  if (name == "d4-r1-leads")
    return quotient(ex.parent, ex.action, ex.rep1).quotient;
  if (name == "d4-r2-leads")
    return quotient(ex.parent, ex.action, ex.rep2).quotient;
  throw ParseError("unknown builtin '" + name +
                   "' (expected d4-parent, d4-r1, d4-r2, d4-r1-leads, "
                   "d4-r2-leads)");
}

Input resolve_input(const std::string& file, const std::string& builtin) {
  if (file.empty() == builtin.empty())
    throw ParseError("exactly one of --graph and --builtin is required");
  Input in;
  if (!file.empty()) {
    in.graph = load_graph(file);
    in.origin = file;
  } else {
    in.graph = builtin_graph(builtin);
    in.origin = "builtin:" + builtin;
  }
  in.hash = hex64(fnv1a(graph_to_json(in.graph)));
  return in;
}

Complex parse_k(const std::string& s) {
  double re = 0, im = 0;
  char extra;
  int n = std::sscanf(s.c_str(), "%lf,%lf %c", &re, &im, &extra);
  if (n != 2) {
    if (std::sscanf(s.c_str(), "%lf %c", &re, &extra) != 1)
      throw ParseError("bad --k value '" + s + "' (expected re or re,im)");
    im = 0.0;
  }
  if (re == 0.0 && im == 0.0)
    throw ParseError("--k: k = 0 is outside the scattering formalism");
  return {re, im};
}

Rectangle parse_rect(const std::string& s) {
  Rectangle r;
  char extra;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf %c", &r.re_min, &r.re_max,
                  &r.im_min, &r.im_max, &extra) != 4)
    throw ParseError("bad --rect value '" + s +
                     "' (expected remin,remax,immin,immax)");
  if (r.re_min >= r.re_max || r.im_min >= r.im_max)
    throw ParseError("--rect: empty rectangle");
  if (r.im_max > 0.0 || r.im_min >= 0.0)
    throw ParseError("--rect: resonance search runs in the open lower "
                     "half-plane (im_min < im_max <= 0)");
  return r;
}

// Accepts an inline matrix ("1,1;1,-1") or the name of a file holding one
// row per line.
Eigen::MatrixXcd parse_matrix(const std::string& spec) {
  std::string s = spec;
  if (std::ifstream f(spec); f) {
    std::stringstream ss;
    ss << f.rdbuf();
    s = ss.str();
    for (char& ch : s)
      if (ch == '\n') ch = ';';
  }
  std::vector<std::vector<double>> rows;
  std::stringstream srows(s);
  std::string row;
  while (std::getline(srows, row, ';')) {
    if (row.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> r;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        r.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("--transplantation: bad entry '" + cell + "'");
      }
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ParseError("bad --transplantation value");
  Eigen::MatrixXcd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw ParseError("--transplantation: ragged matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  }
  return m;
}

void emit(const std::string& out_file, const std::string& text) {
  if (out_file.empty() || out_file == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_file);
  if (!f) throw ParseError("cannot write '" + out_file + "'");
  f << text;
}

std::string manifest(const std::string& command,
                     const std::vector<Input>& inputs,
                     const std::string& params) {
  std::ostringstream os;
  os << "# qgraph " << command << " v0.1.0 " << iso_timestamp() << "\n";
  for (const auto& in : inputs)
    os << "# input " << in.origin << " hash=" << in.hash << "\n";
  if (!params.empty()) os << "# " << params << "\n";
  return os.str();
}

unsigned default_jobs() {
  if (const char* e = std::getenv("QGRAPH_JOBS"))
    return static_cast<unsigned>(std::strtoul(e, nullptr, 10));
  return 0;  // all cores
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric graph spectra, scattering matrices and symmetry "
               "quotients"};
  app.require_subcommand(1);

  unsigned jobs = default_jobs();
  app.add_option("--jobs", jobs, "worker threads (0 = all cores)");
  std::string out_file;
  app.add_option("-o,--output", out_file, "output file (default stdout)");

  std::string g_file, g_builtin;

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "eigenvalues on a k interval");
  double kmin = 0, kmax = 0;
  SpectrumOptions sopt;
  sp->add_option("--graph", g_file, "graph JSON file");
  sp->add_option("--builtin", g_builtin, "built-in example graph");
  sp->add_option("--kmin", kmin)->required();
  sp->add_option("--kmax", kmax)->required();
  sp->add_option("--step", sopt.scan_step, "scan step (default pi/2L)");
  sp->add_option("--tol,--ktol", sopt.k_tol, "eigenvalue tolerance");
  sp->add_option("--ranktol", sopt.rank_tol, "relative rank tolerance");

  // smatrix
  auto* sm = app.add_subcommand("smatrix", "scattering matrix at one k");
  std::string k_str;
  sm->add_option("--graph", g_file, "graph JSON file");
  sm->add_option("--builtin", g_builtin, "built-in example graph");
  sm->add_option("--k", k_str, "wavenumber re or re,im")->required();

  // poles
  auto* po = app.add_subcommand("poles",
                                "resonances in a lower half-plane rectangle");
  std::string rect_str;
  ResonanceOptions ropt;
  po->add_option("--graph", g_file, "graph JSON file");
  po->add_option("--builtin", g_builtin, "built-in example graph");
  po->add_option("--rect", rect_str, "remin,remax,immin,immax")->required();
  po->add_option("--ktol", ropt.k_tol, "refinement tolerance");

  // quotient
  auto* qu = app.add_subcommand("quotient",
                                "quotient graph for a 1-dim representation");
  std::string sym_file, rep_name, prov_file;
  qu->add_option("--graph", g_file, "graph JSON file");
  qu->add_option("--builtin", g_builtin,
                 "built-in quotient (d4-r1, d4-r2, d4-r1-leads, d4-r2-leads)");
  qu->add_option("--symmetry", sym_file, "symmetry JSON file");
  qu->add_option("--rep", rep_name, "representation name in the symmetry file");
  qu->add_option("--provenance", prov_file, "write provenance JSON here");

  // compare
  auto* co = app.add_subcommand("compare", "compare two graphs");
  std::string mode, g2_file, g2_builtin, t_str;
  double tol = 1e-6;
  bool json_out = false;
  co->add_option("--mode", mode, "spectra | poles | smatrix")->required();
  co->add_option("--graph", g_file, "left graph JSON file");
  co->add_option("--builtin", g_builtin, "left built-in graph");
  co->add_option("--graph2", g2_file, "right graph JSON file");
  co->add_option("--builtin2", g2_builtin, "right built-in graph");
  co->add_option("--kmin", kmin, "interval start (mode spectra)");
  co->add_option("--kmax", kmax, "interval end (mode spectra)");
  co->add_option("--rect", rect_str, "rectangle (mode poles)");
  co->add_option("--k", k_str, "wavenumber (mode smatrix)");
  co->add_option("--transplantation", t_str,
                 "rows ';'-separated, entries ','-separated (mode smatrix; "
                 "default: built-in pair matrix)");
  co->add_option("--tol", tol, "pass tolerance");
  co->add_flag("--json", json_out, "machine-readable report");

  for (CLI::App* s : {sp, sm, po, qu, co}) s->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sp->parsed()) {
      Input in = resolve_input(g_file, g_builtin);
      sopt.jobs = jobs;
      Spectrum s = spectrum(in.graph.graph(), kmin, kmax, sopt);
      emit(out_file, manifest("spectrum", {in}, "") +
                         spectrum_to_csv(s, in.hash));
    } else if (sm->parsed()) {
      Input in = resolve_input(g_file, g_builtin);
      ScatteringMatrix s = smatrix(in.graph, parse_k(k_str));
      emit(out_file, manifest("smatrix", {in}, "") + smatrix_to_csv(s, in.hash));
    } else if (po->parsed()) {
      Input in = resolve_input(g_file, g_builtin);
      ropt.jobs = jobs;
      ResonanceSet r = resonances(in.graph, parse_rect(rect_str), ropt);
      emit(out_file, manifest("poles", {in}, "") + poles_to_csv(r, in.hash));
    } else if (qu->parsed()) {
      if (!g_builtin.empty()) {
        if (!g_file.empty() || !sym_file.empty())
          throw ParseError("--builtin excludes --graph/--symmetry");
        emit(out_file, graph_to_json(builtin_graph(g_builtin)));
      } else {
        if (g_file.empty() || sym_file.empty() || rep_name.empty())
          throw ParseError("quotient needs --graph, --symmetry and --rep");
        ExtendedGraph g = load_graph(g_file);
        SymmetryFile sf = load_symmetry(sym_file, g);
        auto it = sf.reps.find(rep_name);
        if (it == sf.reps.end())
          throw ParseError("symmetry file has no representation '" +
                           rep_name + "'");
        QuotientResult q = quotient(g, sf.action, it->second);
        emit(out_file, graph_to_json(q.quotient));
        if (!prov_file.empty()) {
          std::ostringstream os;
          os << "{\n  \"edges\": {";
          bool first = true;
          for (const auto& [id, pr] : q.edge_provenance) {
            os << (first ? "\n" : ",\n") << "    \"" << id << "\": [\""
               << pr.first << "\", \"" << pr.second << "\"]";
            first = false;
          }
          os << "\n  },\n  \"boundary\": {";
          first = true;
          for (const auto& [id, why] : q.boundary_provenance) {
            os << (first ? "\n" : ",\n") << "    \"" << id << "\": \"" << why
               << "\"";
            first = false;
          }
          os << "\n  },\n  \"dropped_edges\": [";
          for (std::size_t i = 0; i < q.dropped_edges.size(); ++i)
            os << (i ? ", " : "") << "\"" << q.dropped_edges[i] << "\"";
          os << "]\n}\n";
          emit(prov_file, os.str());
        }
      }
    } else if (co->parsed()) {
      Input a = resolve_input(g_file, g_builtin);
      Input b = resolve_input(g2_file, g2_builtin);
      if (mode == "spectra") {
        sopt.jobs = jobs;
        ComparisonReport rep =
            compare_spectra(spectrum(a.graph.graph(), kmin, kmax, sopt),
                            spectrum(b.graph.graph(), kmin, kmax, sopt), tol);
        emit(out_file, manifest("compare spectra", {a, b},
                                "tol=" + fmt_double(tol)) +
                           (json_out ? rep.to_json() : rep.summary()));
        return rep.pass ? 0 : 1;
      } else if (mode == "poles") {
        ropt.jobs = jobs;
        Rectangle rect = parse_rect(rect_str);
        ComparisonReport rep = compare_poles(resonances(a.graph, rect, ropt),
                                             resonances(b.graph, rect, ropt),
                                             tol);
        emit(out_file, manifest("compare poles", {a, b},
                                "tol=" + fmt_double(tol)) +
                           (json_out ? rep.to_json() : rep.summary()));
        return rep.pass ? 0 : 1;
      } else if (mode == "smatrix") {
        Complex k = parse_k(k_str);
        Eigen::MatrixXcd t;
        if (!t_str.empty()) {
          t = parse_matrix(t_str);
        } else {
          t = builtin_d4_example().transplantation;
        }
        double resid = conjugation_residual(smatrix(a.graph, k).S,
                                            smatrix(b.graph, k).S, t);
        if (tol == 1e-6) tol = 1e-9;  // tighter default for matrix entries
        bool pass = resid < tol;
        std::ostringstream os;
        os << manifest("compare smatrix", {a, b}, "tol=" + fmt_double(tol));
        os << "conjugation residual at k=" << fmt_double(k.real())
           << (k.imag() < 0 ? "-" : "+") << fmt_double(std::abs(k.imag()))
           << "i: " << fmt_double(resid) << " -> " << (pass ? "PASS" : "FAIL")
           << "\n";
        emit(out_file, os.str());
        return pass ? 0 : 1;
      } else {
        throw ParseError("unknown --mode '" + mode + "'");
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
