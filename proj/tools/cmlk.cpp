// cmlk: Gross-lattice forms of supersingular curves, theta series,
// representability sieve, Eisenstein/cusp decomposition, Shimura lifts and
// twisted central L-values.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 computation error
// (with a machine-readable JSON payload on stderr).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmlk/arith.hpp"
#include "cmlk/errors.hpp"
#include "cmlk/modforms.hpp"
#include "cmlk/quatorders.hpp"
#include "cmlk/serialize.hpp"
#include "cmlk/sieve.hpp"
#include "cmlk/tables.hpp"

using namespace cmlk;
using nlohmann::json;

namespace {

struct global_options {
  std::string out_path;
  int workers = 1;
  std::string cache_dir;
  bool stamp = false;
};

void emit(const global_options& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(opts.out_path, std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open output file: " + opts.out_path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

void emit_json(const global_options& opts, const json& j) { emit(opts, j.dump(2)); }

std::string utc_timestamp() {
  char buf[32];
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

order_type parse_type(const std::string& s) {
  if (s == "I" || s == "i" || s == "1") return order_type::I;
  if (s == "II" || s == "ii" || s == "2") return order_type::II;
  throw CLI::ValidationError("--type", "must be I or II");
}

gross_form minimal_gross(long long p, order_type t) {
  long long q = find_q(p);
  return make_gross_form(build_order(p, q, find_r(q, p, t == order_type::I ? 1 : 4), t));
}

// Resolve sieve parameters for a named form; bundled table forms over F_p
// are matched by an explicit equivalence search.
std::optional<gross_form> resolve_params(long long p, const ternary_form& form) {
  return find_gross_params(p, form);
}

std::string section_cache_path(const std::string& dir, const gross_form& g,
                               long long m_limit) {
  std::ostringstream os;
  os << dir << "/sections_p" << g.p << "_q" << g.q << "_r" << g.r << "_t"
     << order_type_name(g.type) << "_M" << m_limit << ".bin";
  return os.str();
}

exception_report run_sieve(const global_options& opts, const gross_form& g,
                           long long n, long long m, exception_filter filter) {
  section_sets cached;
  const section_sets* use = nullptr;
  std::string cache_path;
  if (!opts.cache_dir.empty()) {
    cache_path = section_cache_path(opts.cache_dir, g, m);
    if (auto loaded = load_sections(cache_path, g, m)) {
      cached = std::move(*loaded);
      use = &cached;
    }
  }
  if (!use && !cache_path.empty()) {
    std::filesystem::create_directories(opts.cache_dir);
    cached = precompute_sections(g, m);
    save_sections(cache_path, cached);
    use = &cached;
  }
  exception_report r = compute_exceptions(g, n, m, filter, opts.workers, use);
  if (opts.stamp) r.timestamp = utc_timestamp();
  return r;
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_gross(const global_options& opts, long long p, const std::string& type_str) {
  order_type t = parse_type(type_str);
  long long q = find_q(p);
  ibukiyama_order o = build_order(p, q, find_r(q, p, t == order_type::I ? 1 : 4), t);
  emit_json(opts, order_to_json(o, make_gross_form(o)));
  return 0;
}

int cmd_theta(const global_options& opts, const std::string& form_str, bool parity,
              long long limit, bool as_json) {
  ternary_form f = ternary_form::parse(form_str);
  theta_series t = parity ? compute_theta(constrained_ternary_form{f}, limit, opts.workers)
                          : compute_theta(f, limit, opts.workers);
  if (as_json)
    emit_json(opts, theta_to_json(t));
  else
    emit(opts, theta_to_csv(t));
  return 0;
}

int cmd_exceptions(const global_options& opts, long long p, const std::string& type_str,
                   const std::string& form_str, long long n, long long m,
                   const std::string& filter_str) {
  exception_filter filter = exception_filter_from_name(filter_str);
  exception_report rep;
  if (!form_str.empty()) {
    ternary_form f = ternary_form::parse(form_str);
    if (auto g = resolve_params(p, f)) {
      rep = run_sieve(opts, *g, n, m, filter);
    } else {
      rep = compute_exceptions_generic(f, p, n, filter, opts.workers);
      if (opts.stamp) rep.timestamp = utc_timestamp();
    }
  } else {
    rep = run_sieve(opts, minimal_gross(p, parse_type(type_str)), n, m, filter);
  }
  emit_json(opts, exception_report_to_json(rep));
  return 0;
}

int cmd_ep(const global_options& opts, long long p, long long n, long long m,
           const std::vector<std::string>& report_files) {
  std::vector<exception_report> reports;
  if (!report_files.empty()) {
    for (const auto& path : report_files) {
      std::ifstream in(path);
      if (!in) throw std::invalid_argument("cannot open report: " + path);
      reports.push_back(exception_report_from_json(json::parse(in)));
    }
  } else {
    auto rows = tables::forms_for_prime(p);
    if (rows.empty()) {
      // not in the bundled tables: fall back to the generated orders
      reports.push_back(run_sieve(opts, minimal_gross(p, order_type::I), n, m,
                                  exception_filter::all_eligible));
      if (p % 4 == 3)
        reports.push_back(run_sieve(opts, minimal_gross(p, order_type::II), n, m,
                                    exception_filter::all_eligible));
    } else {
      for (const auto& row : rows) {
        ternary_form f{row.coeffs};
        if (!row.over_p2) {
          if (auto g = resolve_params(p, f)) {
            reports.push_back(run_sieve(opts, *g, n, m, exception_filter::all_eligible));
            continue;
          }
        }
        exception_report r = compute_exceptions_generic(
            f, p, n, exception_filter::all_eligible, opts.workers);
        if (opts.stamp) r.timestamp = utc_timestamp();
        reports.push_back(std::move(r));
      }
    }
  }
  emit_json(opts, ep_report_to_json(aggregate_ep(std::move(reports), p)));
  return 0;
}

int cmd_eisenstein(const global_options& opts, long long p, long long limit) {
  emit(opts, rational_series_to_csv(eisenstein_series(p, limit)));
  return 0;
}

int cmd_cusp(const global_options& opts, long long p, const std::string& form_str,
             bool parity, long long limit) {
  ternary_form f = ternary_form::parse(form_str);
  theta_series t = parity ? compute_theta(constrained_ternary_form{f}, limit, opts.workers)
                          : compute_theta(f, limit, opts.workers);
  emit(opts, rational_series_to_csv(cusp_part(t, p)));
  return 0;
}

int cmd_shimura(const global_options& opts, long long p, const std::string& form_str,
                bool parity, long long t_param, long long n_max, bool normalize) {
  ternary_form f = ternary_form::parse(form_str);
  long long need = t_param * n_max * n_max;
  theta_series th = parity
                        ? compute_theta(constrained_ternary_form{f}, need, opts.workers)
                        : compute_theta(f, need, opts.workers);
  rational_series g = cusp_part(th, p);
  if (normalize) {
    rational pivot = g.at(t_param);
    if (pivot.is_zero())
      throw computation_error(computation_error::kind::inconsistent_input,
                              "cannot normalize: g(t) = 0");
    for (rational& v : g.a) v /= pivot;
  }
  emit(opts, rational_series_to_csv(shimura_lift(g, t_param, n_max)));
  return 0;
}

newform_coefficients coeffs_for(long long p, const std::string& coeff_file,
                                long long n_max) {
  if (!coeff_file.empty()) return load_newform_coefficients(coeff_file, p);
  if (p == 11) return eta_product_level11(n_max);
  throw computation_error(computation_error::kind::inconsistent_input,
                          "newform coefficients for p != 11 must be supplied "
                          "with --coeff-file");
}

int cmd_lvalue(const global_options& opts, long long p, long long d, double m,
               double epsilon, const std::string& coeff_file, long long n_max) {
  newform_coefficients coeffs = coeffs_for(p, coeff_file, n_max);
  emit_json(opts, lvalue_to_json(twisted_l_value(coeffs, d, m, p, epsilon)));
  return 0;
}

int cmd_c_const(const global_options& opts, long long p, const std::string& form_str,
                bool parity, double epsilon, const std::string& coeff_file,
                long long limit, long long n_max) {
  ternary_form f = ternary_form::parse(form_str);
  theta_series th = parity
                        ? compute_theta(constrained_ternary_form{f}, limit, opts.workers)
                        : compute_theta(f, limit, opts.workers);
  rational_series g = cusp_part(th, p);
  newform_coefficients coeffs = coeffs_for(p, coeff_file, n_max);
  emit_json(opts, c_constant_to_json(compute_c(g, p, coeffs, epsilon)));
  return 0;
}

int cmd_units(const global_options& opts, long long p) {
  json orders = json::array();
  std::vector<long long> ws;
  long long q = find_q(p);
  auto add = [&](order_type t) {
    ibukiyama_order o = build_order(p, q, find_r(q, p, t == order_type::I ? 1 : 4), t);
    long long w = count_units(o);
    ws.push_back(w);
    json j;
    j["type"] = order_type_name(t);
    j["q"] = o.q;
    j["r"] = o.r;
    j["w"] = w;
    orders.push_back(j);
  };
  add(order_type::I);
  if (p % 4 == 3) add(order_type::II);
  measure_set m = measures(ws);
  rational total(0);
  for (long long w : ws) total += rational(1, w);
  json out;
  out["p"] = p;
  out["orders"] = orders;
  out["sum_inv_w"] = total.str();
  json mu = json::array();
  for (const rational& v : m.mu) mu.push_back(v.str());
  out["mu"] = mu;
  out["mu_min"] = m.mu_min.str();
  emit_json(opts, out);
  return 0;
}

int cmd_tables(const global_options& opts, long long p, const std::string& section) {
  json root = json::parse(tables::raw_json());
  json out;
  auto filter_rows = [&](const char* key) {
    json rows = json::array();
    for (const auto& row : root.at(key)) {
      if (p == 0 || row.at("p").get<long long>() == p) rows.push_back(row);
    }
    return rows;
  };
  if (section == "all" || section == "forms") out["forms"] = filter_rows("forms");
  if (section == "all" || section == "exceptions")
    out["exceptions"] = filter_rows("exceptions");
  if (section == "all" || section == "ep") out["ep"] = filter_rows("ep");
  if (section == "all" || section == "dp") out["dp"] = filter_rows("dp");
  emit_json(opts, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gross lattices of supersingular elliptic curves: theta series, "
               "representability sieve, Eisenstein/cusp decomposition, Shimura "
               "lifts, twisted central L-values"};
  app.require_subcommand(1);

  global_options opts;
  app.add_option("--out", opts.out_path, "write output to a file instead of stdout");
  app.add_option("--workers", opts.workers, "worker threads for sweeps and scans")
      ->check(CLI::Range(1, 256));
  app.add_option("--cache-dir", opts.cache_dir,
                 "directory for cached section bitsets (env CMLK_CACHE_DIR)")
      ->envname("CMLK_CACHE_DIR");
  app.add_flag("--stamp", opts.stamp, "record a wall-clock timestamp in reports");

  // gross
  long long p = 11;
  std::string type_str = "I";
  auto* gross = app.add_subcommand("gross", "construct a maximal order and its Gross form");
  gross->add_option("--p", p, "prime p")->required();
  gross->add_option("--type", type_str, "order type (I or II)");

  // theta
  std::string form_str;
  bool parity = false;
  long long limit = 100;
  bool as_json = false;
  auto* theta = app.add_subcommand("theta", "theta series coefficients (CSV n,a(n))");
  theta->add_option("--form", form_str, "form [a,b,c,d,e,f]")->required();
  theta->add_flag("--parity", parity, "constrain z = y (mod 2)");
  theta->add_option("--limit", limit, "highest index")->required();
  theta->add_flag("--json", as_json, "emit JSON instead of CSV");

  // exceptions
  long long n_limit = 100000, m_limit = 10000;
  std::string filter_str = "all-eligible";
  auto* exceptions =
      app.add_subcommand("exceptions", "exact non-represented eligible integers");
  exceptions->add_option("--p", p, "prime p")->required();
  exceptions->add_option("--type", type_str, "order type for the generated form");
  exceptions->add_option("--form", form_str,
                         "explicit form (matched to sieve parameters, or swept)");
  exceptions->add_option("--N", n_limit, "scan bound N")->required();
  exceptions->add_option("--M", m_limit, "section bound M");
  exceptions->add_option("--filter", filter_str,
                         "all-eligible | coprime-only | p-divisible-only");

  // ep
  std::vector<std::string> report_files;
  auto* ep = app.add_subcommand("ep", "aggregate per-form reports into E_p");
  ep->add_option("--p", p, "prime p")->required();
  ep->add_option("--N", n_limit, "scan bound N");
  ep->add_option("--M", m_limit, "section bound M");
  ep->add_option("--reports", report_files, "pre-computed exception report JSON files");

  // eisenstein
  auto* eis = app.add_subcommand("eisenstein", "Eisenstein series (CSV n,num,den)");
  eis->add_option("--p", p, "prime p")->required();
  eis->add_option("--limit", limit, "highest index")->required();

  // cusp
  auto* cusp = app.add_subcommand("cusp", "cusp part of a theta series (CSV)");
  cusp->add_option("--p", p, "prime p")->required();
  cusp->add_option("--form", form_str, "form [a,b,c,d,e,f]")->required();
  cusp->add_flag("--parity", parity, "constrain z = y (mod 2)");
  cusp->add_option("--limit", limit, "highest index")->required();

  // shimura
  long long t_param = 3, lift_nmax = 50;
  bool normalize = false;
  auto* shimura = app.add_subcommand("shimura", "Shimura lift of the cusp part");
  shimura->add_option("--p", p, "prime p")->required();
  shimura->add_option("--form", form_str, "form [a,b,c,d,e,f]")->required();
  shimura->add_flag("--parity", parity, "constrain z = y (mod 2)");
  shimura->add_option("--t", t_param, "lift parameter t")->required();
  shimura->add_option("--nmax", lift_nmax, "lift length");
  shimura->add_flag("--normalize", normalize, "scale so that g(t) = 1");

  // lvalue
  long long d_param = -3;
  double m_scale = 3, epsilon = 1e-10;
  std::string coeff_file;
  long long coeff_nmax = 20000;
  auto* lvalue_cmd = app.add_subcommand("lvalue", "twisted central L-value");
  lvalue_cmd->add_option("--p", p, "prime p (newform level)")->required();
  lvalue_cmd->add_option("--D", d_param, "twisting discriminant")->required();
  lvalue_cmd->add_option("--m", m_scale, "exponential scale m")->required();
  lvalue_cmd->add_option("--epsilon", epsilon, "tail tolerance");
  lvalue_cmd->add_option("--coeff-file", coeff_file, "newform coefficient file");
  lvalue_cmd->add_option("--coeff-nmax", coeff_nmax, "eta-product length (p = 11)");

  // c-const
  auto* cconst = app.add_subcommand("c-const", "Kohnen-Zagier constant of a cusp part");
  cconst->add_option("--p", p, "prime p")->required();
  cconst->add_option("--form", form_str, "form [a,b,c,d,e,f]")->required();
  cconst->add_flag("--parity", parity, "constrain z = y (mod 2)");
  cconst->add_option("--epsilon", epsilon, "L-value tolerance");
  cconst->add_option("--limit", limit, "theta length used for the cusp part");
  cconst->add_option("--coeff-file", coeff_file, "newform coefficient file");
  cconst->add_option("--coeff-nmax", coeff_nmax, "eta-product length (p = 11)");

  // units
  auto* units = app.add_subcommand("units", "unit counts and measures");
  units->add_option("--p", p, "prime p")->required();

  // tables
  long long table_p = 0;
  std::string table_section = "all";
  auto* tables_cmd = app.add_subcommand("tables", "print the bundled appendix fixture");
  tables_cmd->add_option("--p", table_p, "restrict to one prime");
  tables_cmd->add_option("--section", table_section, "all | forms | exceptions | ep | dp");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gross->parsed()) return cmd_gross(opts, p, type_str);
    if (theta->parsed()) return cmd_theta(opts, form_str, parity, limit, as_json);
    if (exceptions->parsed())
      return cmd_exceptions(opts, p, type_str, form_str, n_limit, m_limit, filter_str);
    if (ep->parsed()) return cmd_ep(opts, p, n_limit, m_limit, report_files);
    if (eis->parsed()) return cmd_eisenstein(opts, p, limit);
    if (cusp->parsed()) return cmd_cusp(opts, p, form_str, parity, limit);
    if (shimura->parsed())
      return cmd_shimura(opts, p, form_str, parity, t_param, lift_nmax, normalize);
    if (lvalue_cmd->parsed())
      return cmd_lvalue(opts, p, d_param, m_scale, epsilon, coeff_file, coeff_nmax);
    if (cconst->parsed())
      return cmd_c_const(opts, p, form_str, parity, epsilon, coeff_file, limit,
                         coeff_nmax);
    if (units->parsed()) return cmd_units(opts, p);
    if (tables_cmd->parsed()) return cmd_tables(opts, table_p, table_section);
  } catch (const computation_error& e) {
    json err;
    err["error"] = e.kind_name();
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    json err;
    err["error"] = "invalid-argument";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err;
    err["error"] = "internal";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 1;
}
