#include "hypflow/config.hpp"

#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hypflow {

double TomlValue::as_double() const {
  switch (kind) {
    case Kind::floating: return floating;
    case Kind::integer: return double(integer);
    default: throw std::invalid_argument("config: expected a number");
  }
}

int64_t TomlValue::as_int() const {
  if (kind == Kind::integer) return integer;
  if (kind == Kind::floating && floating == double(int64_t(floating)))
    return int64_t(floating);
  throw std::invalid_argument("config: expected an integer");
}

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char get() {
    char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }
  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("config parse error at line " +
                                std::to_string(line) + ": " + what);
  }
};

std::string parse_bare_key(Cursor& cur) {
  std::string key;
  while (!cur.eof() &&
         (std::isalnum(uint8_t(cur.peek())) || cur.peek() == '_' || cur.peek() == '-' ||
          cur.peek() == '.'))
    key.push_back(cur.get());
  if (key.empty()) cur.fail("expected a key");
  return key;
}

TomlValue parse_value(Cursor& cur);

TomlValue parse_array(Cursor& cur) {
  TomlValue v;
  v.kind = TomlValue::Kind::array;
  cur.get();  // consume '['
  for (;;) {
    while (!cur.eof() && (cur.peek() == ' ' || cur.peek() == '\t' || cur.peek() == '\n' ||
                          cur.peek() == '\r' || cur.peek() == ','))
      cur.get();
    if (cur.eof()) cur.fail("unterminated array");
    if (cur.peek() == ']') { cur.get(); return v; }
    v.array.push_back(parse_value(cur));
  }
}

TomlValue parse_value(Cursor& cur) {
  cur.skip_inline_ws();
  if (cur.eof()) cur.fail("expected a value");
  char c = cur.peek();
  TomlValue v;
  if (c == '"') {
    cur.get();
    v.kind = TomlValue::Kind::string;
    while (!cur.eof() && cur.peek() != '"') {
      char ch = cur.get();
      if (ch == '\\' && !cur.eof()) {
        char esc = cur.get();
        switch (esc) {
          case 'n': ch = '\n'; break;
          case 't': ch = '\t'; break;
          case '"': ch = '"'; break;
          case '\\': ch = '\\'; break;
          default: cur.fail("unsupported escape");
        }
      }
      v.str.push_back(ch);
    }
    if (cur.eof()) cur.fail("unterminated string");
    cur.get();
    return v;
  }
  if (c == '[') return parse_array(cur);
  std::string token;
  while (!cur.eof() && cur.peek() != '\n' && cur.peek() != '\r' && cur.peek() != '#' &&
         cur.peek() != ',' && cur.peek() != ']' && cur.peek() != ' ' && cur.peek() != '\t')
    token.push_back(cur.get());
  if (token == "true" || token == "false") {
    v.kind = TomlValue::Kind::boolean;
    v.boolean = token == "true";
    return v;
  }
  bool looks_float = token.find_first_of(".eE") != std::string::npos;
  try {
    size_t used = 0;
    if (looks_float) {
      v.kind = TomlValue::Kind::floating;
      v.floating = std::stod(token, &used);
    } else if (!token.empty() && token[0] == '-') {
      v.kind = TomlValue::Kind::integer;
      v.integer = std::stoll(token, &used);
    } else {
      v.kind = TomlValue::Kind::integer;
      v.integer = int64_t(std::stoull(token, &used));  // large seeds wrap bitwise
    }
    if (used != token.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    cur.fail("cannot parse value '" + token + "'");
  }
  return v;
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  Cursor cur{text};
  std::string section;
  while (!cur.eof()) {
    cur.skip_inline_ws();
    if (cur.eof()) break;
    char c = cur.peek();
    if (c == '\n' || c == '\r') { cur.get(); continue; }
    if (c == '#') {
      while (!cur.eof() && cur.get() != '\n') {}
      continue;
    }
    if (c == '[') {
      cur.get();
      section = parse_bare_key(cur);
      cur.skip_inline_ws();
      if (cur.eof() || cur.get() != ']') cur.fail("unterminated section header");
      continue;
    }
    std::string key = parse_bare_key(cur);
    cur.skip_inline_ws();
    if (cur.eof() || cur.get() != '=') cur.fail("expected '=' after key");
    TomlValue value = parse_value(cur);
    cur.skip_inline_ws();
    if (!cur.eof() && cur.peek() == '#')
      while (!cur.eof() && cur.peek() != '\n') cur.get();
    std::string full = section.empty() ? key : section + "." + key;
    table[full] = std::move(value);
  }
  return table;
}

TomlTable parse_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_toml(ss.str());
}

namespace {

cplx read_point(const TomlValue& v, const std::string& key) {
  if (v.kind != TomlValue::Kind::array || v.array.size() != 2)
    throw std::invalid_argument("config: " + key + " must be [re, im]");
  return {v.array[0].as_double(), v.array[1].as_double()};
}

}  // namespace

RunConfig config_from_toml(const TomlTable& table) {
  RunConfig cfg;
  auto get = [&](const std::string& key) -> const TomlValue* {
    auto it = table.find(key);
    return it == table.end() ? nullptr : &it->second;
  };
  if (auto* v = get("group.preset")) cfg.preset = v->str;
  if (auto* v = get("group.ell")) cfg.ell = v->as_double();
  if (auto* v = get("group.lambda")) cfg.lambda = v->as_double();
  if (auto* v = get("group.generators")) {
    for (const auto& row : v->array) {
      if (row.kind != TomlValue::Kind::array || row.array.size() != 4)
        throw std::invalid_argument("config: each generator must be [a, b, c, d]");
      cfg.generators.push_back({row.array[0].as_double(), row.array[1].as_double(),
                                row.array[2].as_double(), row.array[3].as_double()});
    }
  }
  if (auto* v = get("base.p")) cfg.p_half = read_point(*v, "base.p");
  if (auto* v = get("base.q")) cfg.q_half = read_point(*v, "base.q");
  if (auto* v = get("base.p2")) cfg.p2_half = read_point(*v, "base.p2");
  if (auto* v = get("run.radius")) cfg.radius = v->as_double();
  if (auto* v = get("run.s")) {
    if (v->kind == TomlValue::Kind::string) {
      if (v->str != "auto") throw std::invalid_argument("config: run.s must be a number or \"auto\"");
      cfg.s = -1.0;
    } else {
      cfg.s = v->as_double();
    }
  }
  if (auto* v = get("run.bins")) cfg.bins = size_t(v->as_int());
  if (auto* v = get("run.samples")) cfg.samples = size_t(v->as_int());
  if (auto* v = get("run.seed")) cfg.seed = uint64_t(v->as_int());
  if (auto* v = get("run.max_elements")) cfg.max_elements = size_t(v->as_int());
  if (auto* v = get("run.svg_max_points")) cfg.svg_max_points = size_t(v->as_int());
  if (auto* v = get("run.out")) cfg.out = v->str;
  if (auto* v = get("thresholds.divergence_epsilon"))
    cfg.thresholds.divergence_epsilon = v->as_double();
  if (auto* v = get("thresholds.conical_plateau_rel"))
    cfg.thresholds.conical_plateau_rel = v->as_double();
  if (auto* v = get("thresholds.conical_c_factor"))
    cfg.thresholds.conical_c_factor = v->as_double();
  if (auto* v = get("thresholds.myrberg_eps")) cfg.thresholds.myrberg_eps = v->as_double();
  if (auto* v = get("thresholds.shadow_R")) cfg.thresholds.shadow_R = v->as_double();
  if (auto* v = get("thresholds.auto_s_margin"))
    cfg.thresholds.auto_s_margin = v->as_double();
  cfg.validate();
  return cfg;
}

RunConfig config_from_file(const std::string& path) {
  return config_from_toml(parse_toml_file(path));
}

void RunConfig::validate() const {
  if (!(radius > 0.0) || radius > 30.0)
    throw std::invalid_argument("config: radius must lie in (0, 30]");
  if (bins < 64 || bins > 65536 || !std::has_single_bit(bins))
    throw std::invalid_argument("config: bins must be a power of two in [64, 65536]");
  if (samples < 1) throw std::invalid_argument("config: samples must be >= 1");
  if (!(p_half.imag() > 0.0) || !(q_half.imag() > 0.0) || !(p2_half.imag() > 0.0))
    throw std::invalid_argument("config: base points must lie in the upper half-plane");
  if (thresholds.shadow_R <= 0.0)
    throw std::invalid_argument("config: shadow_R must be positive");
}

}  // namespace hypflow
