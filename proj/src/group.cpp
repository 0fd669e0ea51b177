#include "fdetect/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fdetect/errors.hpp"

namespace fdetect {

Group::Group(std::vector<int> factors, std::size_t order_cap) : factors_(std::move(factors)), order_(1) {
  if (factors_.empty()) throw ValidationError("group needs at least one cyclic factor");
  for (int f : factors_) {
    if (f < 2) throw ValidationError("cyclic factor " + std::to_string(f) + " is < 2");
    if (order_ * static_cast<std::size_t>(f) > order_cap) {
      throw ValidationError("group order exceeds cap " + std::to_string(order_cap));
    }
    order_ *= static_cast<std::size_t>(f);
  }
}

std::vector<int> Group::to_tuple(std::size_t index) const {
  if (index >= order_) throw ValidationError("element index " + std::to_string(index) + " out of range");
  std::vector<int> tuple(factors_.size());
  for (std::size_t t = factors_.size(); t-- > 0;) {
    const auto f = static_cast<std::size_t>(factors_[t]);
    tuple[t] = static_cast<int>(index % f);
    index /= f;
  }
  return tuple;
}

std::size_t Group::to_index(const std::vector<int>& tuple) const {
  if (tuple.size() != factors_.size()) throw ValidationError("tuple length does not match factor count");
  std::size_t index = 0;
  for (std::size_t t = 0; t < factors_.size(); ++t) {
    if (tuple[t] < 0 || tuple[t] >= factors_[t]) throw ValidationError("tuple coordinate out of range");
    index = index * static_cast<std::size_t>(factors_[t]) + static_cast<std::size_t>(tuple[t]);
  }
  return index;
}

std::size_t Group::add(std::size_t g, std::size_t h) const {
  auto a = to_tuple(g);
  const auto b = to_tuple(h);
  for (std::size_t t = 0; t < a.size(); ++t) a[t] = (a[t] + b[t]) % factors_[t];
  return to_index(a);
}

std::size_t Group::negate(std::size_t g) const {
  auto a = to_tuple(g);
  for (std::size_t t = 0; t < a.size(); ++t) a[t] = (factors_[t] - a[t]) % factors_[t];
  return to_index(a);
}

std::string Group::spec() const {
  std::string s;
  for (std::size_t t = 0; t < factors_.size(); ++t) {
    if (t) s += 'x';
    s += std::to_string(factors_[t]);
  }
  return s;
}

Group make_group(const std::vector<int>& factors, std::size_t order_cap) { return Group(factors, order_cap); }

Group parse_group(std::string_view spec, std::size_t order_cap) {
  std::vector<int> factors;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto end = spec.find_first_of("x*,", pos);
    if (end == std::string_view::npos) end = spec.size();
    const auto token = spec.substr(pos, end - pos);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw ValidationError("bad group spec '" + std::string(spec) + "'");
    }
    factors.push_back(value);
    pos = end + 1;
  }
  return Group(std::move(factors), order_cap);
}

Group tensor_group(const Group& g1, const Group& g2, std::size_t order_cap) {
  auto factors = g1.factors();
  factors.insert(factors.end(), g2.factors().begin(), g2.factors().end());
  return Group(std::move(factors), order_cap);
}

namespace {

long long lcm_of(const std::vector<int>& factors) {
  long long lcm = 1;
  for (int f : factors) lcm = std::lcm(lcm, static_cast<long long>(f));
  return lcm;
}

// exp(2 pi i num / lcm) with 0 <= num < lcm; quarter turns are exact.
Complex root_of_unity(long long num, long long lcm) {
  if ((4 * num) % lcm == 0) {
    switch ((4 * num) / lcm) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  if (2 * num > lcm) num -= lcm;
  const double angle = 2.0 * M_PI * static_cast<double>(num) / static_cast<double>(lcm);
  return {std::cos(angle), std::sin(angle)};
}

long long phase_numerator(const std::vector<int>& factors, const int* a, const int* b, long long lcm) {
  long long num = 0;
  for (std::size_t t = 0; t < factors.size(); ++t) {
    const long long n = factors[t];
    num = (num + (static_cast<long long>(a[t]) * b[t] % n) * (lcm / n)) % lcm;
  }
  return num;
}

} // namespace

Complex character_value(const Group& group, std::size_t chi, std::size_t g) {
  const auto b = group.to_tuple(chi);
  const auto a = group.to_tuple(g);
  const long long lcm = lcm_of(group.factors());
  return root_of_unity(phase_numerator(group.factors(), a.data(), b.data(), lcm), lcm);
}

const char* to_string(FlatBasis::Source source) {
  return source == FlatBasis::Source::FourierOfGroup ? "fourier-of-group" : "loaded-file";
}

double unitarity_deviation(const Matrix& m) {
  // Lower triangle of M M^* suffices: the product is Hermitian.
  Matrix prod = Matrix::Zero(m.rows(), m.rows());
  prod.selfadjointView<Eigen::Lower>().rankUpdate(m);
  double dev = 0.0;
  for (Eigen::Index c = 0; c < prod.cols(); ++c) {
    for (Eigen::Index r = c; r < prod.rows(); ++r) {
      dev = std::max(dev, std::abs(prod(r, c) - (r == c ? Complex(1.0) : Complex(0.0))));
    }
  }
  return dev;
}

FlatnessReport flatness_deviation(const Matrix& m) {
  FlatnessReport report;
  const double target = 1.0 / std::sqrt(static_cast<double>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double dev = std::abs(std::abs(m(r, c)) - target);
      if (dev > report.deviation) report = {dev, static_cast<std::size_t>(r), static_cast<std::size_t>(c)};
    }
  }
  return report;
}

FlatBasis::FlatBasis(Matrix matrix, Source source, std::optional<Group> group)
    : matrix_(std::move(matrix)), source_(source), group_(std::move(group)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw ValidationError("flat basis must be a non-empty square matrix");
  }
  if (group_ && group_->order() != dim()) throw ValidationError("flat basis size does not match group order");
  const auto flat = flatness_deviation(matrix_);
  if (flat.deviation > kFlatnessTol) {
    std::ostringstream os;
    os.precision(17);
    os << "flatness violated at entry (" << flat.row << ", " << flat.col << "): modulus "
       << std::abs(matrix_(static_cast<Eigen::Index>(flat.row), static_cast<Eigen::Index>(flat.col)))
       << " deviates from n^-1/2 by " << flat.deviation;
    throw ValidationError(os.str());
  }
  flatness_ = flat.deviation;
  const double unit = unitarity_deviation(matrix_);
  unitarity_ = unit;
  if (unit > kUnitarityTol) {
    std::ostringstream os;
    os.precision(17);
    os << "unitarity violated: max |U U^* - I| = " << unit;
    throw ValidationError(os.str());
  }
}

FlatBasis fourier_basis(const Group& group) {
  const std::size_t n = group.order();
  const std::size_t r = group.factors().size();
  std::vector<int> tuples(n * r);
  for (std::size_t g = 0; g < n; ++g) {
    const auto t = group.to_tuple(g);
    std::copy(t.begin(), t.end(), tuples.begin() + static_cast<std::ptrdiff_t>(g * r));
  }
  const long long lcm = lcm_of(group.factors());
  // Every entry is a root of unity of order dividing lcm; tabulate them once.
  std::vector<Complex> roots(static_cast<std::size_t>(lcm));
  for (long long k = 0; k < lcm; ++k) roots[static_cast<std::size_t>(k)] = root_of_unity(k, lcm);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix m(dim, dim);
  for (std::size_t phi = 0; phi < n; ++phi) {
    for (std::size_t g = 0; g < n; ++g) {
      const auto num = phase_numerator(group.factors(), &tuples[g * r], &tuples[phi * r], lcm);
      m(static_cast<Eigen::Index>(phi), static_cast<Eigen::Index>(g)) = scale * roots[static_cast<std::size_t>(num)];
    }
  }
  return FlatBasis(std::move(m), FlatBasis::Source::FourierOfGroup, group);
}

namespace {

double parse_real(std::string_view s, std::string_view token) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("cannot parse complex entry '" + std::string(token) + "'");
  }
  return value;
}

Complex parse_complex(std::string_view token) {
  if (const auto comma = token.find(','); comma != std::string_view::npos) {
    return {parse_real(token.substr(0, comma), token), parse_real(token.substr(comma + 1), token)};
  }
  if (token.empty() || (token.back() != 'j' && token.back() != 'J')) return {parse_real(token, token), 0.0};
  const auto body = token.substr(0, token.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_real(body, token)};
  return {parse_real(body.substr(0, split), token), parse_real(body.substr(split), token)};
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

} // namespace

FlatBasis parse_flat_basis(std::string_view text) {
  std::vector<std::vector<std::string_view>> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (auto tokens = split_ws(line); !tokens.empty()) lines.push_back(std::move(tokens));
    pos = end + 1;
  }
  if (lines.empty() || lines[0].size() != 1) throw ValidationError("flat basis file must start with a line holding n");
  std::size_t n = 0;
  {
    const auto tok = lines[0][0];
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || n == 0) {
      throw ValidationError("bad matrix size '" + std::string(tok) + "'");
    }
  }
  if (lines.size() != n + 1) {
    throw ValidationError("expected " + std::to_string(n) + " matrix rows, found " + std::to_string(lines.size() - 1));
  }
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = lines[r + 1];
    if (row.size() != n) {
      throw ValidationError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                            " entries, expected " + std::to_string(n) + " (matrix must be square)");
    }
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(row[c]);
    }
  }
  return FlatBasis(std::move(m), FlatBasis::Source::LoadedFile);
}

FlatBasis load_flat_basis(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open flat basis file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_flat_basis(ss.str());
}

std::string format_flat_basis(const Matrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << m.rows() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto z = m(r, c);
      if (c) os << ' ';
      os << z.real() << (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << 'j';
    }
    os << '\n';
  }
  return os.str();
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool equal_up_to_row_order(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  std::vector<bool> used(static_cast<std::size_t>(b.rows()), false);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    bool found = false;
    for (Eigen::Index s = 0; s < b.rows() && !found; ++s) {
      if (!used[static_cast<std::size_t>(s)] && (a.row(r) - b.row(s)).cwiseAbs().maxCoeff() <= tol) {
        used[static_cast<std::size_t>(s)] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

} // namespace fdetect
