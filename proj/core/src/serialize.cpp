#include "cmlk/serialize.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "cmlk/errors.hpp"

namespace cmlk {

using nlohmann::json;

json form_to_json(const ternary_form& f, bool parity) {
  json j;
  j["coeffs"] = f.coeffs;
  j["parity"] = parity;
  return j;
}

json order_to_json(const ibukiyama_order& o, const gross_form& g) {
  json j;
  j["p"] = o.p;
  j["q"] = o.q;
  j["r"] = o.r;
  j["type"] = order_type_name(o.type);
  json basis = json::array();
  for (const quat& b : o.basis) {
    json row = json::array();
    for (const rational& c : b.c) row.push_back(c.str());
    basis.push_back(row);
  }
  j["basis"] = basis;
  j["gross_form"] = g.base.coeffs;
  j["parity"] = g.parity;
  rational det = g.expanded_determinant();
  j["determinant"] = det.is_integer() ? json(det.num()) : json(det.str());
  return j;
}

json theta_to_json(const theta_series& t) {
  json j;
  j["form"] = t.form.coeffs;
  j["parity"] = t.constrained;
  j["limit"] = t.limit;
  j["coefficients"] = t.coeff;
  return j;
}

std::string theta_to_csv(const theta_series& t) {
  std::ostringstream out;
  for (long long n = 0; n <= t.limit; ++n) out << n << "," << t.at(n) << "\n";
  return out.str();
}

std::string rational_series_to_csv(const rational_series& s) {
  std::ostringstream out;
  for (long long n = 0; n <= s.limit(); ++n) {
    const rational& v = s.at(n);
    out << n << "," << v.num() << "," << v.den() << "\n";
  }
  return out.str();
}

json exception_report_to_json(const exception_report& r) {
  json j;
  j["p"] = r.p;
  j["form"] = r.form;
  j["parity"] = r.parity;
  j["N"] = r.n_limit;
  j["M"] = r.m_limit;
  j["filter"] = exception_filter_name(r.filter);
  j["exceptions"] = r.exceptions;
  j["count"] = r.exceptions.size();
  j["engine"] = r.engine;
  j["timestamp"] = r.timestamp;
  j["tool_version"] = r.tool_version;
  return j;
}

exception_report exception_report_from_json(const json& j) {
  exception_report r;
  r.p = j.at("p").get<long long>();
  auto form = j.at("form").get<std::vector<long long>>();
  if (form.size() != 6)
    throw std::invalid_argument("exception report: form must have 6 coefficients");
  std::copy(form.begin(), form.end(), r.form.begin());
  r.parity = j.at("parity").get<bool>();
  r.n_limit = j.at("N").get<long long>();
  r.m_limit = j.at("M").get<long long>();
  r.filter = exception_filter_from_name(j.at("filter").get<std::string>());
  r.exceptions = j.at("exceptions").get<std::vector<long long>>();
  r.engine = j.value("engine", std::string{});
  r.timestamp = j.value("timestamp", std::string{});
  r.tool_version = j.value("tool_version", std::string{});
  return r;
}

json ep_report_to_json(const ep_report& r) {
  json j;
  j["p"] = r.p;
  j["N"] = r.n_limit;
  j["ep"] = r.ep;
  j["count"] = r.ep.size();
  json reports = json::array();
  for (const auto& rep : r.reports) reports.push_back(exception_report_to_json(rep));
  j["reports"] = reports;
  return j;
}

json lvalue_to_json(const lvalue& l) {
  json j;
  j["value"] = l.value;
  j["error_bound"] = l.error_bound;
  j["cutoff"] = l.cutoff;
  j["D"] = l.d;
  j["scale"] = l.scale;
  return j;
}

json c_constant_to_json(const c_constant& c) {
  json j;
  j["m"] = c.m;
  j["m_fundamental"] = c.m_fundamental;
  j["g_m"] = c.g_m.str();
  j["c"] = c.value;
  j["c_lo"] = c.lo;
  j["c_hi"] = c.hi;
  j["l_value"] = lvalue_to_json(c.l);
  return j;
}

namespace {

constexpr char kSectionMagic[8] = {'C', 'M', 'L', 'K', 'S', 'E', 'C', '1'};

void write_u64(std::ostream& out, uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

bool read_u64(std::istream& in, uint64_t& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return static_cast<bool>(in);
}

void write_bitvec(std::ostream& out, const bitvec& b) {
  write_u64(out, b.size());
  write_u64(out, b.words().size());
  out.write(reinterpret_cast<const char*>(b.words().data()),
            static_cast<std::streamsize>(b.words().size() * sizeof(uint64_t)));
}

bool read_bitvec(std::istream& in, bitvec& b) {
  uint64_t bits = 0, words = 0;
  if (!read_u64(in, bits) || !read_u64(in, words)) return false;
  b.resize_bits(bits);
  if (b.words().size() != words) return false;
  in.read(reinterpret_cast<char*>(b.words().data()),
          static_cast<std::streamsize>(words * sizeof(uint64_t)));
  return static_cast<bool>(in);
}

}  // namespace

void save_sections(const std::string& path, const section_sets& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot write section cache: " + path);
  out.write(kSectionMagic, sizeof(kSectionMagic));
  write_u64(out, static_cast<uint64_t>(s.p));
  write_u64(out, static_cast<uint64_t>(s.q));
  write_u64(out, static_cast<uint64_t>(s.r));
  write_u64(out, s.type == order_type::I ? 1 : 2);
  write_u64(out, static_cast<uint64_t>(s.m_limit));
  write_bitvec(out, s.even);
  write_bitvec(out, s.odd);
  if (!out) throw std::runtime_error("short write to section cache: " + path);
}

std::optional<section_sets> load_sections(const std::string& path,
                                          const gross_form& expected,
                                          long long m_limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kSectionMagic, sizeof(magic)) != 0) return std::nullopt;
  uint64_t p, q, r, type, m;
  if (!read_u64(in, p) || !read_u64(in, q) || !read_u64(in, r) ||
      !read_u64(in, type) || !read_u64(in, m))
    return std::nullopt;
  section_sets s;
  s.p = static_cast<long long>(p);
  s.q = static_cast<long long>(q);
  s.r = static_cast<long long>(r);
  s.type = type == 1 ? order_type::I : order_type::II;
  s.m_limit = static_cast<long long>(m);
  if (s.p != expected.p || s.q != expected.q || s.r != expected.r ||
      s.type != expected.type || s.m_limit != m_limit)
    return std::nullopt;
  if (!read_bitvec(in, s.even) || !read_bitvec(in, s.odd)) return std::nullopt;
  return s;
}

}  // namespace cmlk
