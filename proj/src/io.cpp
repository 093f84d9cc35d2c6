#include "fpt/io.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fpt/error.hpp"

namespace fpt {

using json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorKind::Parse, where + ": " + what);
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(where, e.what());
  }
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, val] : obj.items())
    if (!allowed.count(key)) bad(where, "unknown key \"" + key + "\"");
}

void check_header(const json& j, const std::string& format, const std::string& where) {
  if (!j.is_object()) bad(where, "top level must be an object");
  if (!j.contains("format") || j["format"] != format)
    bad(where, "missing or wrong format tag, expected \"" + format + "\"");
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != kFormatVersion)
    bad(where, "unsupported version");
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) bad(where, "missing integer \"" + key + "\"");
  long long v = obj[key].get<long long>();
  if (v < -kDegreeWindow || v > kDegreeWindow) bad(where, "\"" + key + "\" out of range");
  return static_cast<int>(v);
}

json xi_to_json(const SeriesVector& z) {
  json out = json::object();
  out["prec"] = z.exact() ? json(nullptr) : json(*z.prec);
  json coeffs = json::array();
  for (const auto& [deg, v] : z.c) coeffs.push_back(json::array({deg, v}));
  out["coefficients"] = std::move(coeffs);
  return out;
}

SeriesVector xi_from_json(const json& j, u32 p, int d, const std::string& where) {
  if (!j.is_object()) bad(where, "xi must be an object");
  check_keys(j, {"prec", "coefficients"}, where);
  if (!j.contains("prec") || !j.contains("coefficients")) bad(where, "xi needs prec and coefficients");
  SeriesVector z = series_zero(p, d);
  if (!j["prec"].is_null()) {
    if (!j["prec"].is_number_integer()) bad(where, "prec must be null or an integer");
    z = series_zero_mod(p, d, j["prec"].get<int>());
  }
  if (!j["coefficients"].is_array()) bad(where, "coefficients must be an array");
  for (const auto& entry : j["coefficients"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
        !entry[1].is_array() || entry[1].size() != static_cast<size_t>(d))
      bad(where, "each coefficient must be [degree, [d entries]]");
    FpVec v(d, 0);
    for (int c = 0; c < d; ++c) {
      if (!entry[1][c].is_number_unsigned() || entry[1][c].get<u32>() >= p)
        bad(where, "coefficient entries must lie in [0, p)");
      v[c] = entry[1][c].get<u32>();
    }
    int deg = entry[0].get<int>();
    if (vec_is_zero(v)) bad(where, "zero coefficient stored at degree " + std::to_string(deg));
    if (!z.known_at(deg)) bad(where, "coefficient beyond the declared precision");
    if (!vec_is_zero(series_at(z, deg)))
      bad(where, "duplicate coefficient at degree " + std::to_string(deg));
    series_set(z, deg, std::move(v));
  }
  return z;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  const std::string where = "instance";
  json j = parse_json(text, where);
  check_header(j, "fpt-instance", where);
  check_keys(j, {"format", "version", "p", "d", "blocks", "metadata"}, where);
  if (!j.contains("p") || !j["p"].is_number_unsigned()) bad(where, "missing modulus p");
  u32 p = j["p"].get<u32>();
  if (p < 2 || p >= (1u << 16) || !is_prime_u32(p)) bad(where, "p must be a prime below 2^16");
  int d = get_int(j, "d", where);
  if (d < 1 || d > 64) bad(where, "d must be in [1, 64]");

  BlockMatrix a0 = bm_zero(p, d);
  if (!j.contains("blocks") || !j["blocks"].is_array()) bad(where, "missing blocks array");
  std::set<std::pair<int, int>> seen;
  for (const auto& b : j["blocks"]) {
    if (!b.is_object()) bad(where, "each block must be an object");
    check_keys(b, {"i", "j", "entries"}, where + " block");
    int bi = get_int(b, "i", where + " block");
    int bj = get_int(b, "j", where + " block");
    if (!seen.insert({bi, bj}).second)
      bad(where, "duplicate block (" + std::to_string(bi) + ", " + std::to_string(bj) + ")");
    if (!b.contains("entries") || !b["entries"].is_array() ||
        b["entries"].size() != static_cast<size_t>(d))
      bad(where, "entries must be a d x d grid");
    MatFp m(p, d, d);
    for (int r = 0; r < d; ++r) {
      const auto& row = b["entries"][r];
      if (!row.is_array() || row.size() != static_cast<size_t>(d))
        bad(where, "entries must be a d x d grid");
      for (int c = 0; c < d; ++c) {
        if (!row[c].is_number_unsigned() || row[c].get<u32>() >= p)
          bad(where, "entries must lie in [0, p)");
        m.at(r, c) = row[c].get<u32>();
      }
    }
    if (m.is_zero()) bad(where, "zero block (" + std::to_string(bi) + ", " + std::to_string(bj) + ")");
    bm_set(a0, bi, bj, std::move(m));
  }

  Instance out;
  out.rep = make_rep(p, d, std::move(a0));
  if (j.contains("metadata")) {
    const json& md = j["metadata"];
    if (!md.is_object()) bad(where, "metadata must be an object");
    check_keys(md, {"family", "seed"}, where + " metadata");
    if (md.contains("family")) {
      if (!md["family"].is_string()) bad(where, "family must be a string");
      out.family = md["family"].get<std::string>();
    }
    if (md.contains("seed")) {
      if (!md["seed"].is_number_integer()) bad(where, "seed must be an integer");
      out.seed = md["seed"].get<long long>();
    }
  }
  return out;
}

std::string serialize_instance(const Rep& rep, const std::string& family,
                               std::optional<long long> seed) {
  json j = json::object();
  j["format"] = "fpt-instance";
  j["version"] = kFormatVersion;
  j["p"] = rep.p;
  j["d"] = rep.d;
  json blocks = json::array();
  for (const auto& [key, m] : rep.a0.blocks) {
    json b = json::object();
    b["i"] = key.i;
    b["j"] = key.j;
    json rows = json::array();
    for (int r = 0; r < rep.d; ++r) {
      json row = json::array();
      for (int c = 0; c < rep.d; ++c) row.push_back(m.at(r, c));
      rows.push_back(std::move(row));
    }
    b["entries"] = std::move(rows);
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);
  if (!family.empty() || seed) {
    json md = json::object();
    if (!family.empty()) md["family"] = family;
    if (seed) md["seed"] = *seed;
    j["metadata"] = std::move(md);
  }
  return j.dump(2) + "\n";
}

std::string serialize_result(u32 p, int d, const FixedVectorResult& res) {
  json j = json::object();
  j["format"] = "fpt-result";
  j["version"] = kFormatVersion;
  j["p"] = p;
  j["d"] = d;
  j["xi"] = xi_to_json(res.xi);
  j["exact"] = res.exact;
  json residuals = json::array();
  for (const auto& e : res.residuals) {
    json r = json::object();
    r["r"] = e.r;
    r["pass"] = e.pass;
    r["checked_through"] = e.checked_through ? json(*e.checked_through) : json(nullptr);
    residuals.push_back(std::move(r));
  }
  j["residuals"] = std::move(residuals);
  json oracle = json::object();
  oracle["checked"] = res.oracle_checked;
  oracle["found"] = res.oracle_found;
  oracle["agree"] = res.oracle_pass;
  j["oracle"] = std::move(oracle);
  j["trace"] = res.trace;
  return j.dump(2) + "\n";
}

ParsedResult parse_result(const std::string& text) {
  const std::string where = "result";
  json j = parse_json(text, where);
  check_header(j, "fpt-result", where);
  check_keys(j, {"format", "version", "p", "d", "xi", "exact", "residuals", "oracle", "trace"},
             where);
  ParsedResult out;
  if (!j.contains("p") || !j["p"].is_number_unsigned()) bad(where, "missing modulus p");
  out.p = j["p"].get<u32>();
  if (out.p < 2 || out.p >= (1u << 16) || !is_prime_u32(out.p)) bad(where, "p must be a prime below 2^16");
  out.d = get_int(j, "d", where);
  if (out.d < 1 || out.d > 64) bad(where, "d must be in [1, 64]");
  if (!j.contains("xi")) bad(where, "missing xi");
  out.res.xi = xi_from_json(j["xi"], out.p, out.d, where + " xi");
  if (!j.contains("exact") || !j["exact"].is_boolean()) bad(where, "missing exact flag");
  out.res.exact = j["exact"].get<bool>();
  if (out.res.exact != out.res.xi.exact()) bad(where, "exact flag contradicts xi precision");
  if (!j.contains("residuals") || !j["residuals"].is_array()) bad(where, "missing residuals");
  for (const auto& r : j["residuals"]) {
    if (!r.is_object()) bad(where, "each residual must be an object");
    check_keys(r, {"r", "pass", "checked_through"}, where + " residual");
    ResidualEntry e;
    e.r = get_int(r, "r", where + " residual");
    if (!r.contains("pass") || !r["pass"].is_boolean()) bad(where, "residual needs a pass flag");
    e.pass = r["pass"].get<bool>();
    if (r.contains("checked_through") && !r["checked_through"].is_null()) {
      if (!r["checked_through"].is_number_integer()) bad(where, "checked_through must be an integer");
      e.checked_through = r["checked_through"].get<int>();
    }
    out.res.residuals.push_back(e);
  }
  if (!j.contains("oracle") || !j["oracle"].is_object()) bad(where, "missing oracle report");
  const json& oracle = j["oracle"];
  check_keys(oracle, {"checked", "found", "agree"}, where + " oracle");
  for (const char* key : {"checked", "found", "agree"})
    if (!oracle.contains(key) || !oracle[key].is_boolean())
      bad(where, std::string("oracle needs boolean \"") + key + "\"");
  out.res.oracle_checked = oracle["checked"].get<bool>();
  out.res.oracle_found = oracle["found"].get<bool>();
  out.res.oracle_pass = oracle["agree"].get<bool>();
  if (!j.contains("trace") || !j["trace"].is_array()) bad(where, "missing trace");
  for (const auto& line : j["trace"]) {
    if (!line.is_string()) bad(where, "trace entries must be strings");
    out.res.trace.push_back(line.get<std::string>());
  }
  return out;
}

SeriesVector parse_poly(const std::string& text, u32 p) {
  const std::string where = "polynomial \"" + text + "\"";
  SeriesVector z = series_zero(p, 1);
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto parse_int = [&](const std::string& what) {
    skip_ws();
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    skip_ws();
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      bad(where, "expected " + what + " at position " + std::to_string(i));
    long long v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + (text[i++] - '0');
      if (v > kDegreeWindow) bad(where, what + " out of range");
    }
    return neg ? -v : v;
  };

  skip_ws();
  if (i >= text.size()) bad(where, "empty polynomial");
  bool first = true;
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    long long sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      bad(where, "expected + or - at position " + std::to_string(i));
    }
    first = false;
    skip_ws();
    long long coeff = 1;
    bool saw_coeff = false;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      coeff = parse_int("coefficient");
      saw_coeff = true;
      skip_ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip_ws();
      }
    }
    long long deg = 0;
    if (i < text.size() && text[i] == 't') {
      ++i;
      deg = 1;
      skip_ws();
      if (i < text.size() && text[i] == '^') {
        ++i;
        deg = parse_int("exponent");
      }
    } else if (!saw_coeff) {
      bad(where, "expected a term at position " + std::to_string(i));
    } else {
      deg = 0;
    }
    long long c = ((sign * coeff) % static_cast<long long>(p) + p) % p;
    if (c != 0) series_add_to(z, static_cast<int>(deg), FpVec{static_cast<u32>(c)});
  }
  return z;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorKind::Io, "read error on " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << text;
  out.flush();
  if (!out) fail(ErrorKind::Io, "write error on " + path);
}

}  // namespace fpt
