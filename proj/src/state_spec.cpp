#include "qmaj/state_spec.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <map>

#include "qmaj/error.hpp"
#include "qmaj/measure_grid.hpp"

namespace qmaj {

const char* to_string(Rep r) { return r == Rep::Wigner ? "wigner" : "husimi"; }

int StateSpec::modes() const {
  switch (kind) {
    case StateKind::Tensor: {
      int m = 0;
      for (const auto& c : children) m += c.modes();
      return m;
    }
    case StateKind::Mix:
    case StateKind::Lossy:
    case StateKind::Dephase:
      return children.empty() ? 1 : children.front().modes();
    default:
      return 1;
  }
}

StateSpec StateSpec::fock(int n) {
  StateSpec s;
  s.n = n;
  return s;
}

StateSpec StateSpec::coherent(std::complex<double> alpha) {
  StateSpec s;
  s.kind = StateKind::Coherent;
  s.alpha = alpha;
  return s;
}

StateSpec StateSpec::thermal(double nbar) {
  StateSpec s;
  s.kind = StateKind::Thermal;
  s.nbar = nbar;
  return s;
}

StateSpec StateSpec::cat(double alpha) {
  StateSpec s;
  s.kind = StateKind::Cat;
  s.alpha = alpha;
  return s;
}

StateSpec StateSpec::on(std::complex<double> a, int n) {
  StateSpec s;
  s.kind = StateKind::On;
  s.alpha = a;
  s.n = n;
  return s;
}

StateSpec StateSpec::cubic(double g, double sq, double p) {
  StateSpec s;
  s.kind = StateKind::Cubic;
  s.g = g;
  s.s = sq;
  s.p = p;
  return s;
}

StateSpec StateSpec::lossy(double eta, StateSpec inner) {
  StateSpec s;
  s.kind = StateKind::Lossy;
  s.eta = eta;
  s.children.push_back(std::move(inner));
  return s;
}

StateSpec StateSpec::dephase(double gamma, StateSpec inner) {
  StateSpec s;
  s.kind = StateKind::Dephase;
  s.gamma = gamma;
  s.children.push_back(std::move(inner));
  return s;
}

StateSpec StateSpec::mix(std::vector<double> weights, std::vector<StateSpec> parts) {
  StateSpec s;
  s.kind = StateKind::Mix;
  s.weights = std::move(weights);
  s.children = std::move(parts);
  return s;
}

StateSpec StateSpec::tensor(std::vector<StateSpec> parts) {
  StateSpec s;
  s.kind = StateKind::Tensor;
  s.children = std::move(parts);
  return s;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_complex(std::complex<double> z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string im = format_double(z.imag()) + "i";
  if (z.real() == 0.0) return im;
  return format_double(z.real()) + (z.imag() < 0.0 ? "" : "+") + im;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  StateSpec parse_all() {
    StateSpec s = spec();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError("state spec: " + msg, at);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool at_number() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }

  // Reads a real without consuming a trailing imaginary unit.
  double real_number() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '+') ++pos_;
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const auto res = std::from_chars(first, text_.data() + text_.size(), v);
    if (res.ec != std::errc() || res.ptr == first || !std::isfinite(v))
      fail_at("expected a number", start);
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return v;
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    const double v = real_number();
    if (v != std::floor(v) || std::abs(v) > 1e6) fail_at("expected an integer", start);
    return static_cast<int>(v);
  }

  // a, a+bi, a-bi, bi, i
  std::complex<double> complex_number() {
    skip_ws();
    double re = 0.0;
    if (peek('i')) {
      ++pos_;
      return {0.0, 1.0};
    }
    const double first = real_number();
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      return {0.0, first};
    }
    re = first;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const bool neg = text_[pos_] == '-';
      const std::size_t start = pos_;
      ++pos_;
      double im = 1.0;
      if (!(pos_ < text_.size() && text_[pos_] == 'i')) im = real_number();
      if (!(pos_ < text_.size() && text_[pos_] == 'i')) fail_at("expected imaginary unit 'i'", start);
      ++pos_;
      return {re, neg ? -im : im};
    }
    return {re, 0.0};
  }

  StateSpec spec() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string name = identifier();
    if (name == "vacuum") return StateSpec::fock(0);
    if (name == "fock" && peek(':')) {
      ++pos_;
      const std::size_t at = pos_;
      const int n = integer();
      if (n < 0) fail_at("Fock number must be nonnegative", at);
      return StateSpec::fock(n);
    }
    expect('(');
    StateSpec out;
    if (name == "fock") {
      auto kv = keyed({"n"});
      out = StateSpec::fock(as_int(kv.at("n")));
    } else if (name == "coherent") {
      auto kv = keyed({"alpha"});
      out = StateSpec::coherent(as_complex(kv.at("alpha")));
    } else if (name == "thermal") {
      auto kv = keyed({"nbar"});
      out = StateSpec::thermal(as_real(kv.at("nbar")));
    } else if (name == "cat") {
      auto kv = keyed({"alpha"});
      const auto a = as_complex(kv.at("alpha"));
      if (a.imag() != 0.0) throw SemanticError("cat: alpha must be real");
      out = StateSpec::cat(a.real());
    } else if (name == "on") {
      auto kv = keyed({"a", "n"});
      out = StateSpec::on(as_complex(kv.at("a")), as_int(kv.at("n")));
    } else if (name == "cubic") {
      auto kv = keyed({"g", "s", "p"}, {"p"});
      out = StateSpec::cubic(as_real(kv.at("g")), as_real(kv.at("s")),
                             kv.count("p") ? as_real(kv.at("p")) : 0.0);
    } else if (name == "lossy" || name == "dephase") {
      const char* key = name == "lossy" ? "eta" : "gamma";
      skip_ws();
      const std::size_t key_at = pos_;
      if (identifier() != key) fail_at(std::string("expected '") + key + "='", key_at);
      expect('=');
      const double v = real_number();
      expect(',');
      StateSpec inner = spec();
      out = name == "lossy" ? StateSpec::lossy(v, std::move(inner))
                            : StateSpec::dephase(v, std::move(inner));
    } else if (name == "mix") {
      std::vector<double> w;
      std::vector<StateSpec> parts;
      do {
        w.push_back(real_number());
        expect(':');
        parts.push_back(spec());
      } while (peek(',') && (++pos_, true));
      out = StateSpec::mix(std::move(w), std::move(parts));
    } else if (name == "tensor") {
      std::vector<StateSpec> parts;
      do {
        parts.push_back(spec());
      } while (peek(',') && (++pos_, true));
      out = StateSpec::tensor(std::move(parts));
    } else {
      fail_at("unknown state '" + name + "'", start);
    }
    expect(')');
    return out;
  }

  struct Raw {
    std::size_t at;
    std::size_t end;
  };

  // Parses key=value pairs; values are kept as source ranges and decoded by
  // the as_* helpers with the cursor moved back onto them.
  std::map<std::string, Raw> keyed(std::initializer_list<const char*> allowed,
                                   std::initializer_list<const char*> optional = {}) {
    std::map<std::string, Raw> kv;
    if (!peek(')')) {
      do {
        skip_ws();
        const std::size_t key_at = pos_;
        const std::string key = identifier();
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) fail_at("unexpected argument '" + key + "'", key_at);
        if (kv.count(key)) fail_at("duplicate argument '" + key + "'", key_at);
        expect('=');
        skip_ws();
        const std::size_t v_at = pos_;
        complex_number();
        kv[key] = {v_at, pos_};
      } while (peek(',') && (++pos_, true));
    }
    for (const char* a : allowed) {
      bool opt = false;
      for (const char* o : optional) opt = opt || std::string_view(a) == o;
      if (!opt && !kv.count(a)) fail(std::string("missing argument '") + a + "'");
    }
    return kv;
  }

  std::complex<double> as_complex(Raw r) {
    Parser sub(text_.substr(0, r.end));
    sub.pos_ = r.at;
    return sub.complex_number();
  }

  double as_real(Raw r) {
    const auto z = as_complex(r);
    if (z.imag() != 0.0) fail_at("expected a real number", r.at);
    return z.real();
  }

  int as_int(Raw r) {
    const double v = as_real(r);
    if (v != std::floor(v) || std::abs(v) > 1e6) fail_at("expected an integer", r.at);
    return static_cast<int>(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

void validate(const StateSpec& s, int max_tensor_arity) {
  switch (s.kind) {
    case StateKind::Fock:
      if (s.n < 0) throw SemanticError("fock: n must be nonnegative");
      break;
    case StateKind::On:
      if (s.n < 1) throw SemanticError("on: n must be at least 1");
      break;
    case StateKind::Cat:
      if (s.alpha.imag() != 0.0) throw SemanticError("cat: alpha must be real");
      break;
    case StateKind::Lossy:
      if (!(s.eta >= 0.0 && s.eta <= 1.0)) throw SemanticError("lossy: eta must lie in [0, 1]");
      break;
    case StateKind::Dephase:
      if (!(s.gamma >= 0.0)) throw SemanticError("dephase: gamma must be nonnegative");
      break;
    case StateKind::Mix: {
      if (s.weights.size() != s.children.size() || s.children.empty())
        throw SemanticError("mix: needs matching weights and parts");
      double total = 0.0;
      for (double w : s.weights) {
        if (!(w > 0.0)) throw SemanticError("mix: weights must be positive");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-9)
        throw SemanticError("mix: weights sum to " + format_double(total) + ", expected 1");
      for (const auto& c : s.children)
        if (c.modes() != s.children.front().modes())
          throw SemanticError("mix: parts have different mode counts");
      break;
    }
    case StateKind::Tensor:
      if (s.children.size() < 2) throw SemanticError("tensor: needs at least two parts");
      if (static_cast<int>(s.children.size()) > max_tensor_arity)
        throw SemanticError("tensor: arity above " + std::to_string(max_tensor_arity));
      break;
    default:
      break;
  }
  if ((s.kind == StateKind::Lossy || s.kind == StateKind::Dephase) && s.children.size() != 1)
    throw SemanticError("channel state needs exactly one inner state");
  if ((s.kind == StateKind::Lossy || s.kind == StateKind::Dephase) && s.children[0].modes() != 1)
    throw SemanticError("lossy/dephase act on single-mode states");
  for (const auto& c : s.children) validate(c, max_tensor_arity);
  if (s.modes() > kMaxModes) throw SemanticError("state exceeds the supported mode count");
}

StateSpec parse_state(std::string_view text) {
  StateSpec s = Parser(text).parse_all();
  validate(s);
  return s;
}

std::string to_string(const StateSpec& s) {
  switch (s.kind) {
    case StateKind::Fock:
      return s.n == 0 ? "vacuum" : "fock:" + std::to_string(s.n);
    case StateKind::Coherent:
      return "coherent(alpha=" + format_complex(s.alpha) + ")";
    case StateKind::Thermal:
      return "thermal(nbar=" + format_double(s.nbar) + ")";
    case StateKind::Cat:
      return "cat(alpha=" + format_double(s.alpha.real()) + ")";
    case StateKind::On:
      return "on(a=" + format_complex(s.alpha) + ",n=" + std::to_string(s.n) + ")";
    case StateKind::Cubic: {
      std::string out = "cubic(g=" + format_double(s.g) + ",s=" + format_double(s.s);
      if (s.p != 0.0) out += ",p=" + format_double(s.p);
      return out + ")";
    }
    case StateKind::Lossy:
      return "lossy(eta=" + format_double(s.eta) + "," + to_string(s.children.at(0)) + ")";
    case StateKind::Dephase:
      return "dephase(gamma=" + format_double(s.gamma) + "," + to_string(s.children.at(0)) + ")";
    case StateKind::Mix: {
      std::string out = "mix(";
      for (std::size_t k = 0; k < s.children.size(); ++k) {
        if (k) out += ",";
        out += format_double(s.weights[k]) + ":" + to_string(s.children[k]);
      }
      return out + ")";
    }
    case StateKind::Tensor: {
      std::string out = "tensor(";
      for (std::size_t k = 0; k < s.children.size(); ++k) {
        if (k) out += ",";
        out += to_string(s.children[k]);
      }
      return out + ")";
    }
  }
  return "?";
}

}  // namespace qmaj
