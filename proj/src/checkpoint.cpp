#include "oscfie/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace oscfie {

namespace {

const char* const kNetworkTag = "oscfie-sinmlp";
const char* const kStackTag = "oscfie-gradestack";

void put(std::ostream& os, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", x);
  os << buf;
}

double get(std::istream& is) {
  std::string token;
  if (!(is >> token)) throw std::runtime_error("checkpoint: unexpected end of data");
  char* end = nullptr;
  const double x = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) throw std::runtime_error("checkpoint: bad number '" + token + "'");
  return x;
}

long get_count(std::istream& is, const char* keyword) {
  std::string word;
  long n = -1;
  if (!(is >> word >> n) || word != keyword || n < 0)
    throw std::runtime_error(std::string("checkpoint: expected '") + keyword + " <count>'");
  return n;
}

void expect_header(std::istream& is, const char* tag) {
  std::string word;
  int version = 0;
  if (!(is >> word >> version) || word != tag) throw std::runtime_error(std::string("checkpoint: missing ") + tag + " header");
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
}

void put_vector(std::ostream& os, const CVector& v) {
  os << "vector " << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    put(os, v[i].real());
    os << ' ';
    put(os, v[i].imag());
    os << '\n';
  }
}

CVector get_vector(std::istream& is) {
  const long n = get_count(is, "vector");
  CVector v(n);
  for (long i = 0; i < n; ++i) {
    const double re = get(is);
    v[i] = {re, get(is)};
  }
  return v;
}

template <typename Fn>
void with_file(const std::string& path, std::ios::openmode mode, Fn&& fn) {
  std::fstream f(path, mode);
  if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
  fn(f);
  if (f.bad()) throw std::runtime_error("checkpoint: I/O error on " + path);
}

}  // namespace

void save_network(std::ostream& os, const SinMlp& net) {
  net.validate();
  os << kNetworkTag << ' ' << kCheckpointVersion << '\n';
  os << "layers " << net.layers.size() << '\n';
  for (const auto& layer : net.layers) {
    os << "layer " << layer.W.rows() << ' ' << layer.W.cols() << ' ' << (layer.trainable ? 1 : 0) << '\n';
    for (Eigen::Index r = 0; r < layer.W.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.W.cols(); ++c) {
        if (c) os << ' ';
        put(os, layer.W(r, c));
      }
      os << '\n';
    }
    for (Eigen::Index r = 0; r < layer.b.size(); ++r) {
      if (r) os << ' ';
      put(os, layer.b[r]);
    }
    os << '\n';
  }
}

SinMlp load_network(std::istream& is) {
  expect_header(is, kNetworkTag);
  const long count = get_count(is, "layers");
  SinMlp net;
  for (long j = 0; j < count; ++j) {
    std::string word;
    long rows = 0, cols = 0;
    int trainable = 0;
    if (!(is >> word >> rows >> cols >> trainable) || word != "layer" || rows < 1 || cols < 1)
      throw std::runtime_error("checkpoint: malformed layer header");
    DenseLayer layer;
    layer.W.resize(rows, cols);
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c) layer.W(r, c) = get(is);
    layer.b.resize(rows);
    for (long r = 0; r < rows; ++r) layer.b[r] = get(is);
    layer.trainable = trainable != 0;
    net.layers.push_back(std::move(layer));
  }
  try {
    net.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("checkpoint: ") + e.what());
  }
  return net;
}

void save_stack(std::ostream& os, const GradeStack& stack) {
  os << kStackTag << ' ' << kCheckpointVersion << '\n';
  os << "grades " << stack.grades.size() << '\n';
  for (const auto& net : stack.grades) save_network(os, net);
  os << "residuals " << stack.residuals.size() << '\n';
  for (const auto& r : stack.residuals) put_vector(os, r);
  os << "components " << stack.components.size() << '\n';
  for (const auto& c : stack.components) put_vector(os, c);
}

GradeStack load_stack(std::istream& is) {
  expect_header(is, kStackTag);
  GradeStack stack;
  const long grades = get_count(is, "grades");
  for (long g = 0; g < grades; ++g) stack.grades.push_back(load_network(is));
  const long residuals = get_count(is, "residuals");
  for (long r = 0; r < residuals; ++r) stack.residuals.push_back(get_vector(is));
  const long components = get_count(is, "components");
  for (long c = 0; c < components; ++c) stack.components.push_back(get_vector(is));
  if (residuals != grades + 1 || components != grades)
    throw std::runtime_error("checkpoint: residual/component count does not match grade count");
  return stack;
}

void rebuild_node_features(GradeStack& stack, const std::vector<double>& nodes) {
  stack.node_features = stack_features(stack, nodes);
}

void save_network_file(const std::string& path, const SinMlp& net) {
  with_file(path, std::ios::out | std::ios::trunc, [&](std::fstream& f) { save_network(f, net); });
}

SinMlp load_network_file(const std::string& path) {
  SinMlp net;
  with_file(path, std::ios::in, [&](std::fstream& f) { net = load_network(f); });
  return net;
}

void save_stack_file(const std::string& path, const GradeStack& stack) {
  with_file(path, std::ios::out | std::ios::trunc, [&](std::fstream& f) { save_stack(f, stack); });
}

GradeStack load_stack_file(const std::string& path) {
  GradeStack stack;
  with_file(path, std::ios::in, [&](std::fstream& f) { stack = load_stack(f); });
  return stack;
}

}  // namespace oscfie
