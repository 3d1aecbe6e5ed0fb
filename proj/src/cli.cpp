#include "cubeslice/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <thread>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cubeslice/ball_integral.hpp"
#include "cubeslice/certify.hpp"
#include "cubeslice/cube_section.hpp"
#include "cubeslice/extremal_search.hpp"
#include "cubeslice/khintchine.hpp"
#include "cubeslice/minentropy.hpp"

namespace cubeslice::cli {

namespace {

double parse_double(const std::string& tok) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "not a number: '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) throw Error(ErrorCode::ParseError, "not a finite number: '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

constexpr const char* kSchemas = R"(Output tables (CSV: a '# note' line, a header line, one line per row;
JSON: {"provenance", "columns", "rows": [{column: value}]}):
  section        method,value,err_bound,note
  ball-integral  s,value,err_bound,bound,margin      (bound = sqrt(2/s), margin = bound - value)
  khintchine     n,r1,method,haagerup_lower_bound,max_coord
  f              s,form,value,err_bound
  minentropy     quantity,index,value
  certify        check,param,value,reference,pass
  search         kind,n,value,a,converged_restarts   (a is ';'-separated)
Exit codes: 0 all checks passed, 1 a certification failed, 2 usage or input error.)";

struct Output {
  std::string format = "csv";
  std::string file;
};

void emit(const ResultTable& t, const Output& o, std::ostream& out) {
  std::ostringstream buf;
  if (o.format == "json") {
    t.write_json(buf);
  } else {
    t.write_csv(buf);
  }
  if (o.file.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(o.file, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open output file '" + o.file + "'");
    f << buf.str();
  }
}

// Evaluates f on every grid point with a bounded number of worker threads.
// Results come back in grid order; the first failing point (in grid order)
// rethrows its error.
template <class F>
auto parallel_map(const std::vector<double>& grid, F f) {
  using R = decltype(f(0.0));
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  std::vector<R> out;
  out.reserve(grid.size());
  for (std::size_t start = 0; start < grid.size(); start += width) {
    std::vector<std::future<R>> batch;
    for (std::size_t i = start; i < std::min(grid.size(), start + width); ++i) {
      batch.push_back(std::async(std::launch::async, f, grid[i]));
    }
    for (auto& fut : batch) out.push_back(fut.get());
  }
  return out;
}

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s;
}

}  // namespace

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> v;
  for (const auto& tok : split(text, ',')) v.push_back(parse_double(tok));
  if (v.empty()) throw Error(ErrorCode::ParseError, "empty list");
  return v;
}

SweepSpec SweepSpec::parse(const std::string& text) {
  SweepSpec sp;
  if (text.find(':') == std::string::npos) {
    sp.grid = parse_csv_doubles(text);
    return sp;
  }
  const auto parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 4) throw Error(ErrorCode::ParseError, "sweep must be lo:hi:steps[:lin|log]");
  const double lo = parse_double(parts[0]), hi = parse_double(parts[1]);
  const double steps_d = parse_double(parts[2]);
  const std::string scale = parts.size() == 4 ? parts[3] : "lin";
  if (scale != "lin" && scale != "log") throw Error(ErrorCode::ParseError, "scale must be lin or log");
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "sweep needs lo < hi");
  if (steps_d != std::floor(steps_d) || steps_d < 2 || steps_d > 1e6) {
    throw Error(ErrorCode::InvalidArgument, "steps must be an integer >= 2");
  }
  const int steps = static_cast<int>(steps_d);
  if (scale == "log" && !(lo > 0)) throw Error(ErrorCode::InvalidArgument, "log sweep needs lo > 0");
  for (int i = 0; i < steps; ++i) {
    const double f = static_cast<double>(i) / (steps - 1);
    sp.grid.push_back(scale == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  return sp;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cube slicing, Ball's integral, Khintchine moments and min-entropy power: evaluators and "
               "certification sweeps.",
               "cubeslice"};
  app.footer(kSchemas);
  app.require_subcommand(1, 1);
  Output o;
  app.add_option("--out", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--file", o.file, "Write the table here instead of stdout");

  std::string a_text, t_text = "0";
  auto* section = app.add_subcommand("section", "Volume of the cube section {x : <x,a> = t}");
  section->add_option("--a", a_text, "Comma-separated direction (normalized internally)")->required();
  section->add_option("--t", t_text, "Offset of the hyperplane");

  std::string s_text, sweep_text;
  auto* ball = app.add_subcommand("ball-integral", "B(s) = integral of |sin(pi u)/(pi u)|^s");
  auto* s_opt = ball->add_option("--s", s_text, "Exponent s > 1");
  auto* sw_opt = ball->add_option("--sweep", sweep_text, "Grid: a,b,c or lo:hi:steps[:lin|log]");
  s_opt->excludes(sw_opt);

  std::string ka_text;
  auto* khin = app.add_subcommand("khintchine", "E|sum a_k B_k| with the Haagerup and max-coordinate bounds");
  khin->add_option("--a", ka_text, "Comma-separated coefficients")->required();

  std::string fs_text, form = "gamma";
  long product_terms = 10000;
  auto* fcmd = app.add_subcommand("f", "Haagerup's F(s)");
  fcmd->add_option("--s", fs_text, "s > 0, or a grid a,b,c or lo:hi:steps[:lin|log]")->required();
  fcmd->add_option("--form", form, "gamma | product | integral")->check(CLI::IsMember({"gamma", "product", "integral"}));
  fcmd->add_option("--terms", product_terms, "Factors in the product form")->check(CLI::PositiveNumber);

  std::string dens_file, me_eps;
  auto* me = app.add_subcommand("minentropy", "Min-entropy power of an independent sum");
  me->add_option("--densities", dens_file, "Density file ('lo hi c0 c1 ...' lines, 'point x', blank-line blocks)")
      ->required();
  me->add_option("--eps", me_eps, "Also evaluate the quantitative corollary at this eps");

  std::string theorem, c_eps, c_grid;
  std::uint64_t seed = 0;
  auto* cert = app.add_subcommand("certify", "Run a certification sweep");
  std::string ids_help = "One of:";
  for (const auto& id : certification_ids()) ids_help += " " + id;
  cert->add_option("theorem", theorem, ids_help)->required()->check(CLI::IsMember(certification_ids()));
  cert->add_option("--eps", c_eps, "Comma-separated epsilon grid");
  cert->add_option("--grid", c_grid, "Parameter grid: a,b,c or lo:hi:steps[:lin|log]");
  cert->add_option("--seed", seed, "64-bit seed");

  std::string kind;
  int n = 0, restarts = 20;
  std::uint64_t search_seed = 0;
  auto* search = app.add_subcommand("search", "Multistart search for extremal directions");
  search->add_option("kind", kind, "section | r1")->required()->check(CLI::IsMember({"section", "r1"}));
  search->add_option("--n", n, "Dimension")->required();
  search->add_option("--restarts", restarts, "Number of restarts")->check(CLI::PositiveNumber);
  search->add_option("--seed", search_seed, "64-bit seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    err << "usage error: " << msg << '\n';
    return 2;
  }

  try {
    if (*section) {
      const Direction a = Direction::normalize(parse_csv_doubles(a_text));
      const double t = parse_double(t_text);
      ResultTable tab({"method", "value", "err_bound", "note"}, "sigma(a,t) for a = normalize(" + a_text + ")");
      const SectionQuery q{a, t};
      const IntegralResult best = section_volume(q);
      tab.add_row({std::string("auto"), best.value, best.err_bound, best.detail});
      try {
        tab.add_row({std::string("geometric"), section_volume_geometric(q), 0.0, std::string("inclusion-exclusion")});
      } catch (const Error& e) {
        tab.add_row({std::string("geometric"), NAN, NAN, std::string(to_string(e.code()))});
      }
      try {
        const IntegralResult f = section_volume_fourier(q);
        tab.add_row({std::string("fourier"), f.value, f.err_bound, f.detail});
      } catch (const Error& e) {
        tab.add_row({std::string("fourier"), NAN, NAN, std::string(to_string(e.code()))});
      }
      tab.add_row({std::string("projection_bound"), projection_bound(a), 0.0, std::string("1/max|a_j|")});
      emit(tab, o, out);
      return 0;
    }
    if (*ball) {
      std::vector<double> grid;
      if (!s_text.empty()) {
        grid.push_back(parse_double(s_text));
      } else if (!sweep_text.empty()) {
        grid = SweepSpec::parse(sweep_text).grid;
      } else {
        throw Error(ErrorCode::InvalidArgument, "ball-integral needs --s or --sweep");
      }
      ResultTable tab({"s", "value", "err_bound", "bound", "margin"}, "B(s) against sqrt(2/s)");
      const auto results = parallel_map(grid, [](double s) { return ball_integral(s); });
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double bound = gaussian_comparison(grid[i]);
        tab.add_row({grid[i], results[i].value, results[i].err_bound, bound, bound - results[i].value});
      }
      emit(tab, o, out);
      return 0;
    }
    if (*khin) {
      const Direction a = Direction::normalize(parse_csv_doubles(ka_text));
      ResultTable tab({"n", "r1", "method", "haagerup_lower_bound", "max_coord"}, "R1(a) = E|sum a_k B_k|");
      const RademacherMoment m = canonicalize(a).size() <= 24 ? r1_exact(a) : r1_cosine_integral(a);
      tab.add_row({static_cast<std::int64_t>(a.size()), m.value, std::string(to_string(m.method)),
                   haagerup_lower_bound(a), max_coord_bound(a)});
      emit(tab, o, out);
      return 0;
    }
    if (*fcmd) {
      ResultTable tab({"s", "form", "value", "err_bound"}, "Haagerup F(s), " + form + " form");
      const auto values = parallel_map(SweepSpec::parse(fs_text).grid, [&](double s) {
        if (form == "gamma") return f_gamma(s);
        if (form == "product") return f_product(s, product_terms);
        return f_integral(s);
      });
      for (const Fvalue& f : values) tab.add_row({f.s, std::string(to_string(f.form)), f.value, f.err_bound});
      emit(tab, o, out);
      return 0;
    }
    if (*me) {
      std::ifstream in(dens_file);
      if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + dens_file + "'");
      const auto xs = parse_distributions(in);
      ResultTable tab({"quantity", "index", "value"}, "min-entropy power of the independent sum");
      for (std::size_t i = 0; i < xs.size(); ++i) {
        tab.add_row({std::string("M"), static_cast<std::int64_t>(i), m_functional(xs[i])});
        tab.add_row({std::string("N_inf"), static_cast<std::int64_t>(i), n_infinity(xs[i])});
      }
      bool pass = true;
      if (xs.size() >= 2) {
        const EpiReport r = sum_min_entropy(xs);
        const RogozinResult g = rogozin_compare(xs);
        tab.add_row({std::string("N_inf_sum"), std::int64_t{-1}, r.lhs});
        tab.add_row({std::string("half_sum_N_inf"), std::int64_t{-1}, r.rhs});
        tab.add_row({std::string("slack"), std::int64_t{-1}, r.slack});
        tab.add_row({std::string("rogozin_N_inf_sum_Z"), std::int64_t{-1}, g.sum_z});
        tab.add_row({std::string("rogozin_section_route"), std::int64_t{-1}, g.sum_z_section});
        pass = r.slack >= -1e-9 && g.holds && g.routes_agree;
        if (!me_eps.empty()) {
          const EpiReport q = quantitative_epi_report(xs, parse_double(me_eps));
          tab.add_row({std::string("hypothesis_lhs"), std::int64_t{-1}, q.hypothesis_lhs});
          tab.add_row({std::string("hypothesis_lhs_direct"), std::int64_t{-1}, q.hypothesis_lhs_direct});
          tab.add_row({std::string("hypothesis_holds"), std::int64_t{-1}, q.hypothesis_holds ? 1.0 : 0.0});
          tab.add_row({std::string("certified"), std::int64_t{-1}, q.certified ? 1.0 : 0.0});
          pass = pass && (!q.hypothesis_holds || q.certified);
        }
      }
      emit(tab, o, out);
      return pass ? 0 : 1;
    }
    if (*cert) {
      CertifyOptions opt;
      opt.seed = seed;
      if (!c_eps.empty()) opt.eps = parse_csv_doubles(c_eps);
      if (!c_grid.empty()) opt.grid = SweepSpec::parse(c_grid).grid;
      const Certification c = certify(theorem, opt);
      emit(c.table, o, out);
      return c.pass ? 0 : 1;
    }
    if (*search) {
      SearchConfig sc;
      sc.restarts = restarts;
      sc.seed = search_seed;
      const SearchResult r = kind == "section" ? maximize_section(n, sc) : minimize_r1(n, sc);
      ResultTable tab({"kind", "n", "value", "a", "converged_restarts"},
                      kind == "section" ? "maximum of sigma(a,0) found" : "minimum of R1(a) found");
      tab.add_row({kind, static_cast<std::int64_t>(n), r.value, join(r.a.coords()),
                   static_cast<std::int64_t>(r.converged_restarts)});
      emit(tab, o, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace cubeslice::cli
