#include "igd/instance_io.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "igd/error.h"

namespace igd {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

class Writer {
 public:
  void field(const char* key, const std::string& value) {
    out_ << key;
    if (!value.empty()) out_ << ' ' << value;
    out_ << '\n';
  }

  void vector(const std::string& name, const Vector& v) {
    out_ << "vector " << name << ' ' << v.size();
    for (double x : v) out_ << ' ' << format_real(x);
    out_ << '\n';
  }

  void matrix(const std::string& name, const Matrix& m) {
    out_ << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j) out_ << ' ';
        out_ << format_real(m(i, j));
      }
      out_ << '\n';
    }
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kIo, "malformed instance: " + what);
}

double parse_real(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || *end != '\0') malformed("bad number '" + token + "'");
  return v;
}

std::size_t parse_size(const std::string& token) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
  if (token.empty() || *end != '\0') malformed("bad integer '" + token + "'");
  return static_cast<std::size_t>(v);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::istringstream line() {
    std::string text;
    if (!std::getline(in_, text)) malformed("unexpected end of input");
    return std::istringstream(text);
  }

  std::string field(const std::string& key) {
    std::istringstream ls = line();
    std::string k, v;
    ls >> k >> v;
    if (k != key) malformed("expected '" + key + "', found '" + k + "'");
    return v;
  }

  Vector vector(const std::string& name) {
    std::istringstream ls = line();
    std::string tag, n, len;
    ls >> tag >> n >> len;
    if (tag != "vector" || n != name) malformed("expected vector " + name);
    Vector v(parse_size(len));
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::string tok;
      if (!(ls >> tok)) malformed("short vector " + name);
      v[i] = parse_real(tok);
    }
    return v;
  }

  Matrix matrix(const std::string& name) {
    std::istringstream ls = line();
    std::string tag, n, rows, cols;
    ls >> tag >> n >> rows >> cols;
    if (tag != "matrix" || n != name) malformed("expected matrix " + name);
    Matrix m(parse_size(rows), parse_size(cols));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::istringstream row = line();
      for (std::size_t j = 0; j < m.cols(); ++j) {
        std::string tok;
        if (!(row >> tok)) malformed("short matrix row in " + name);
        m(i, j) = parse_real(tok);
      }
    }
    return m;
  }

 private:
  std::istream& in_;
};

std::string indexed(const char* base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

}  // namespace

std::string serialize_instance(const GeneratedInstance& instance) {
  Writer w;
  w.field("igd-instance", "1");
  w.field("class", problem_class_name(instance.spec.cls));
  w.field("dimension", std::to_string(instance.spec.dimension));
  w.field("components", std::to_string(instance.spec.components));
  w.field("matrix_size", std::to_string(instance.spec.matrix_size));
  w.field("seed", std::to_string(instance.spec.seed));
  w.field("attempts", std::to_string(instance.attempts));
  const ReferenceOptimum& ref = instance.reference;
  w.field("reference", std::string(provenance_name(ref.provenance)) + " " +
                           (ref.value ? format_real(*ref.value) : "unknown") + " " +
                           (ref.low_confidence ? "1" : "0"));
  w.vector("anchor", instance.program.anchor());
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, LinData>) {
          w.vector("c", d.c);
          w.matrix("a", d.a);
        } else if constexpr (std::is_same_v<T, SdpData>) {
          w.vector("c", d.c);
          w.vector("x_hat", d.x_hat);
          w.matrix("c_mat", d.c_mat);
          w.matrix("d_mat", d.d_mat);
          w.matrix("z_mat", d.z_mat);
          for (std::size_t i = 0; i < d.a.size(); ++i) w.matrix(indexed("a", i), d.a[i]);
        } else if constexpr (std::is_same_v<T, SocData>) {
          w.vector("c", d.c);
          w.vector("x0_raw", d.x0_raw);
          w.vector("d", d.d);
          for (std::size_t i = 0; i < d.a.size(); ++i) {
            w.matrix(indexed("a", i), d.a[i]);
            w.vector(indexed("b", i), d.b[i]);
            w.vector(indexed("z", i), d.z[i]);
          }
        } else if constexpr (std::is_same_v<T, NormData>) {
          w.vector("c", d.c);
        } else if constexpr (std::is_same_v<T, ExpData>) {
          w.vector("c", d.c);
          w.vector("b", d.b);
        } else {
          w.vector("a", d.a);
          w.vector("offset", Vector{d.offset});
          w.vector("constrained_optimum", d.constrained_optimum);
        }
      },
      instance.data);
  w.field("end", "");
  return w.str();
}

GeneratedInstance parse_instance(std::istream& in) {
  Reader r(in);
  if (r.field("igd-instance") != "1") malformed("unsupported format version");
  ProblemSpec spec;
  try {
    spec.cls = parse_problem_class(r.field("class"));
  } catch (const Error&) {
    malformed("unknown class");
  }
  spec.dimension = parse_size(r.field("dimension"));
  spec.components = parse_size(r.field("components"));
  spec.matrix_size = parse_size(r.field("matrix_size"));
  spec.seed = parse_size(r.field("seed"));
  const int attempts = static_cast<int>(parse_size(r.field("attempts")));

  ReferenceOptimum ref;
  {
    std::istringstream ls = r.line();
    std::string key, prov, value, low;
    ls >> key >> prov >> value >> low;
    if (key != "reference") malformed("expected 'reference'");
    if (prov == "analytic") {
      ref.provenance = ReferenceProvenance::kAnalytic;
    } else if (prov == "derived-oracle") {
      ref.provenance = ReferenceProvenance::kDerivedOracle;
    } else if (prov != "unknown") {
      malformed("unknown provenance '" + prov + "'");
    }
    if (value != "unknown") ref.value = parse_real(value);
    ref.low_confidence = low == "1";
  }

  Vector anchor = r.vector("anchor");
  InstanceData data;
  switch (spec.cls) {
    case ProblemClass::kLin: {
      LinData d;
      d.c = r.vector("c");
      d.a = r.matrix("a");
      data = std::move(d);
      break;
    }
    case ProblemClass::kSdp: {
      SdpData d;
      d.c = r.vector("c");
      d.x_hat = r.vector("x_hat");
      d.c_mat = r.matrix("c_mat");
      d.d_mat = r.matrix("d_mat");
      d.z_mat = r.matrix("z_mat");
      for (std::size_t i = 0; i < spec.dimension; ++i) d.a.push_back(r.matrix(indexed("a", i)));
      data = std::move(d);
      break;
    }
    case ProblemClass::kSoc: {
      SocData d;
      d.c = r.vector("c");
      d.x0_raw = r.vector("x0_raw");
      d.d = r.vector("d");
      for (std::size_t i = 0; i < spec.components; ++i) {
        d.a.push_back(r.matrix(indexed("a", i)));
        d.b.push_back(r.vector(indexed("b", i)));
        d.z.push_back(r.vector(indexed("z", i)));
      }
      data = std::move(d);
      break;
    }
    case ProblemClass::kNorm:
      data = NormData{r.vector("c")};
      break;
    case ProblemClass::kExp: {
      ExpData d;
      d.c = r.vector("c");
      d.b = r.vector("b");
      data = std::move(d);
      break;
    }
    case ProblemClass::kDemoFig1: {
      DemoData d;
      d.a = r.vector("a");
      const Vector offset = r.vector("offset");
      if (offset.size() != 1) malformed("offset must have one entry");
      d.offset = offset[0];
      d.constrained_optimum = r.vector("constrained_optimum");
      d.optimum_value = 0.5 * dot(d.constrained_optimum, d.constrained_optimum);
      data = std::move(d);
      break;
    }
  }
  r.field("end");
  try {
    return assemble_instance(spec, std::move(data), std::move(anchor), ref, attempts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    malformed(e.what());
  }
}

GeneratedInstance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

GeneratedInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return parse_instance(in);
}

void write_instance_file(const GeneratedInstance& instance, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << serialize_instance(instance);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

std::uint64_t instance_hash(const GeneratedInstance& instance) {
  return fnv1a64(serialize_instance(instance));
}

}  // namespace igd
