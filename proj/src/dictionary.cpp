#include "spdeconv/dictionary.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spdeconv/errors.hpp"

namespace spdeconv {

namespace wavelets {

Eigen::VectorXd lowpass(const std::string& family) {
  if (family == "haar") {
    Eigen::VectorXd h(2);
    h << M_SQRT1_2, M_SQRT1_2;
    return h;
  }
  if (family == "sym4") {
    // 8-tap least-asymmetric orthogonal filter.
    Eigen::VectorXd h(8);
    h << -0.07576571478927333, -0.02963552764599851, 0.49761866763201545,
        0.80373875180591614, 0.29785779560527736, -0.09921954357684722,
        -0.01260396726203783, 0.03222310060404270;
    return h;
  }
  if (family == "db4") {
    // 8-tap extremal-phase orthogonal filter.
    Eigen::VectorXd h(8);
    h << 0.23037781330885523, 0.71484657055254153, 0.63088076792959036,
        -0.02798376941698385, -0.18703481171888114, 0.03084138183598697,
        0.03288301166698295, -0.01059740178499728;
    return h;
  }
  throw UsageError("unknown wavelet family '" + family + "'");
}

Eigen::VectorXd highpass_from_lowpass(const Eigen::VectorXd& h) {
  const Index n = h.size();
  Eigen::VectorXd g(n);
  for (Index k = 0; k < n; ++k) g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[n - 1 - k];
  return g;
}

} // namespace wavelets

void Dictionary::check_image(const Image& x) const {
  if (x.rows() != height() || x.cols() != width())
    throw std::invalid_argument("dictionary: image dimension mismatch");
}

void Dictionary::check_coefs(const CoefVec& a) const {
  if (a.size() != num_coefficients())
    throw std::invalid_argument("dictionary: coefficient length mismatch");
}

namespace {

bool is_pow2(Index v) { return v > 0 && (v & (v - 1)) == 0; }

void require_dyadic(Index width, Index height, int levels) {
  if (levels < 1) throw std::invalid_argument("dictionary: levels must be >= 1");
  if (!is_pow2(width) || !is_pow2(height))
    throw std::invalid_argument("dictionary: image sides must be powers of two");
  const Index min_side = std::min(width, height);
  if ((Index{1} << levels) > min_side)
    throw std::invalid_argument("dictionary: too many levels for image size");
}

// --- 1-D periodic filter-bank passes -------------------------------------

// Decimating analysis: lo[i] = sum_k h[k] s[(2i+k) mod m], i < m/2.
void split_dec(const double* s, Index m, const Eigen::VectorXd& h,
               const Eigen::VectorXd& g, double* lo, double* hi) {
  const Index half = m / 2, fl = h.size();
  for (Index i = 0; i < half; ++i) {
    double al = 0, ah = 0;
    for (Index k = 0; k < fl; ++k) {
      const double v = s[(2 * i + k) % m];
      al += h[k] * v;
      ah += g[k] * v;
    }
    lo[i] = al;
    hi[i] = ah;
  }
}

// Exact adjoint of split_dec (also the inverse for orthonormal filters).
void merge_dec(const double* lo, const double* hi, Index m, const Eigen::VectorXd& h,
               const Eigen::VectorXd& g, double* s) {
  const Index half = m / 2, fl = h.size();
  for (Index i = 0; i < m; ++i) s[i] = 0;
  for (Index i = 0; i < half; ++i)
    for (Index k = 0; k < fl; ++k)
      s[(2 * i + k) % m] += h[k] * lo[i] + g[k] * hi[i];
}

// Undecimated analysis with holes of size `step`; the 1/sqrt(2) factor makes
// each split energy-preserving.
void split_undec(const double* s, Index m, Index step, const Eigen::VectorXd& h,
                 const Eigen::VectorXd& g, double* lo, double* hi) {
  const Index fl = h.size();
  for (Index i = 0; i < m; ++i) {
    double al = 0, ah = 0;
    for (Index k = 0; k < fl; ++k) {
      const double v = s[(i + step * k) % m];
      al += h[k] * v;
      ah += g[k] * v;
    }
    lo[i] = M_SQRT1_2 * al;
    hi[i] = M_SQRT1_2 * ah;
  }
}

void merge_undec(const double* lo, const double* hi, Index m, Index step,
                 const Eigen::VectorXd& h, const Eigen::VectorXd& g, double* s) {
  const Index fl = h.size();
  for (Index i = 0; i < m; ++i) s[i] = 0;
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < fl; ++k)
      s[(i + step * k) % m] += M_SQRT1_2 * (h[k] * lo[i] + g[k] * hi[i]);
}

// --- separable 2-D level passes -------------------------------------------

struct Bands {
  Image ll, h, v, d;
};

// Rows are filtered along x first, then columns along y.
Bands analyze_level_dec(const Image& in, const Eigen::VectorXd& h,
                        const Eigen::VectorXd& g) {
  const Index rows = in.rows(), cols = in.cols();
  const Index hc = cols / 2, hr = rows / 2;
  Image rl(rows, hc), rh(rows, hc);
  for (Index r = 0; r < rows; ++r)
    split_dec(in.data() + r * cols, cols, h, g, rl.data() + r * hc, rh.data() + r * hc);

  Bands b{Image(hr, hc), Image(hr, hc), Image(hr, hc), Image(hr, hc)};
  Eigen::VectorXd buf(rows), lo(hr), hi(hr);
  for (Index c = 0; c < hc; ++c) {
    for (Index r = 0; r < rows; ++r) buf[r] = rl(r, c);
    split_dec(buf.data(), rows, h, g, lo.data(), hi.data());
    for (Index r = 0; r < hr; ++r) {
      b.ll(r, c) = lo[r];
      b.v(r, c) = hi[r];
    }
    for (Index r = 0; r < rows; ++r) buf[r] = rh(r, c);
    split_dec(buf.data(), rows, h, g, lo.data(), hi.data());
    for (Index r = 0; r < hr; ++r) {
      b.h(r, c) = lo[r];
      b.d(r, c) = hi[r];
    }
  }
  return b;
}

Image synth_level_dec(const Bands& b, const Eigen::VectorXd& h,
                      const Eigen::VectorXd& g) {
  const Index hr = b.ll.rows(), hc = b.ll.cols();
  const Index rows = hr * 2, cols = hc * 2;
  Image rl(rows, hc), rh(rows, hc);
  Eigen::VectorXd lo(hr), hi(hr), col(rows);
  for (Index c = 0; c < hc; ++c) {
    for (Index r = 0; r < hr; ++r) {
      lo[r] = b.ll(r, c);
      hi[r] = b.v(r, c);
    }
    merge_dec(lo.data(), hi.data(), rows, h, g, col.data());
    for (Index r = 0; r < rows; ++r) rl(r, c) = col[r];
    for (Index r = 0; r < hr; ++r) {
      lo[r] = b.h(r, c);
      hi[r] = b.d(r, c);
    }
    merge_dec(lo.data(), hi.data(), rows, h, g, col.data());
    for (Index r = 0; r < rows; ++r) rh(r, c) = col[r];
  }
  Image out(rows, cols);
  for (Index r = 0; r < rows; ++r)
    merge_dec(rl.data() + r * hc, rh.data() + r * hc, cols, h, g, out.data() + r * cols);
  return out;
}

Bands analyze_level_undec(const Image& in, Index step, const Eigen::VectorXd& h,
                          const Eigen::VectorXd& g) {
  const Index rows = in.rows(), cols = in.cols();
  Image rl(rows, cols), rh(rows, cols);
  for (Index r = 0; r < rows; ++r)
    split_undec(in.data() + r * cols, cols, step, h, g, rl.data() + r * cols,
                rh.data() + r * cols);

  Bands b{Image(rows, cols), Image(rows, cols), Image(rows, cols), Image(rows, cols)};
  Eigen::VectorXd buf(rows), lo(rows), hi(rows);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) buf[r] = rl(r, c);
    split_undec(buf.data(), rows, step, h, g, lo.data(), hi.data());
    for (Index r = 0; r < rows; ++r) {
      b.ll(r, c) = lo[r];
      b.v(r, c) = hi[r];
    }
    for (Index r = 0; r < rows; ++r) buf[r] = rh(r, c);
    split_undec(buf.data(), rows, step, h, g, lo.data(), hi.data());
    for (Index r = 0; r < rows; ++r) {
      b.h(r, c) = lo[r];
      b.d(r, c) = hi[r];
    }
  }
  return b;
}

Image synth_level_undec(const Bands& b, Index step, const Eigen::VectorXd& h,
                        const Eigen::VectorXd& g) {
  const Index rows = b.ll.rows(), cols = b.ll.cols();
  Image rl(rows, cols), rh(rows, cols);
  Eigen::VectorXd lo(rows), hi(rows), col(rows);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      lo[r] = b.ll(r, c);
      hi[r] = b.v(r, c);
    }
    merge_undec(lo.data(), hi.data(), rows, step, h, g, col.data());
    for (Index r = 0; r < rows; ++r) rl(r, c) = col[r];
    for (Index r = 0; r < rows; ++r) {
      lo[r] = b.h(r, c);
      hi[r] = b.d(r, c);
    }
    merge_undec(lo.data(), hi.data(), rows, step, h, g, col.data());
    for (Index r = 0; r < rows; ++r) rh(r, c) = col[r];
  }
  Image out(rows, cols);
  for (Index r = 0; r < rows; ++r)
    merge_undec(rl.data() + r * cols, rh.data() + r * cols, cols, step, h, g,
                out.data() + r * cols);
  return out;
}

void copy_block_out(const Image& img, CoefVec& flat, Index offset) {
  Eigen::Map<Eigen::VectorXd>(flat.data() + offset, img.size()) =
      Eigen::Map<const Eigen::VectorXd>(img.data(), img.size());
}

Image copy_block_in(const CoefVec& flat, Index offset, Index rows, Index cols) {
  Image img(rows, cols);
  Eigen::Map<Eigen::VectorXd>(img.data(), img.size()) =
      Eigen::Map<const Eigen::VectorXd>(flat.data() + offset, rows * cols);
  return img;
}

// --- concrete dictionaries -------------------------------------------------

class IdentityDictionary final : public Dictionary {
 public:
  IdentityDictionary(Index width, Index height) : width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("identity dictionary: nonpositive dimensions");
    subbands_ = {{0, SubbandKind::pixel, 0, height, width}};
  }

  CoefVec analyze(const Image& x) const override {
    check_image(x);
    return Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
  }
  Image synthesize(const CoefVec& a) const override {
    check_coefs(a);
    return copy_block_in(a, 0, height_, width_);
  }
  double frame_constant() const override { return 1.0; }
  DictionaryKind kind() const override { return DictionaryKind::orthobasis; }
  Index width() const override { return width_; }
  Index height() const override { return height_; }
  Index num_coefficients() const override { return width_ * height_; }
  const std::vector<Subband>& subbands() const override { return subbands_; }
  std::string spec() const override { return "identity"; }

 private:
  Index width_, height_;
  std::vector<Subband> subbands_;
};

class DwtDictionary final : public Dictionary {
 public:
  DwtDictionary(Index width, Index height, int levels, std::string family)
      : width_(width), height_(height), levels_(levels), family_(std::move(family)),
        h_(wavelets::lowpass(family_)), g_(wavelets::highpass_from_lowpass(h_)) {
    require_dyadic(width, height, levels);
    Index offset = 0;
    const Index ar = height >> levels, ac = width >> levels;
    subbands_.push_back({levels, SubbandKind::approx, offset, ar, ac});
    offset += ar * ac;
    for (int j = levels; j >= 1; --j) {
      const Index r = height >> j, c = width >> j;
      for (auto kind : {SubbandKind::horizontal, SubbandKind::vertical, SubbandKind::diagonal}) {
        subbands_.push_back({j, kind, offset, r, c});
        offset += r * c;
      }
    }
  }

  CoefVec analyze(const Image& x) const override {
    check_image(x);
    CoefVec flat(num_coefficients());
    Image cur = x;
    std::vector<Bands> detail(levels_);
    for (int j = 1; j <= levels_; ++j) {
      detail[j - 1] = analyze_level_dec(cur, h_, g_);
      cur = detail[j - 1].ll;
    }
    copy_block_out(cur, flat, subbands_[0].offset);
    size_t band = 1;
    for (int j = levels_; j >= 1; --j) {
      copy_block_out(detail[j - 1].h, flat, subbands_[band++].offset);
      copy_block_out(detail[j - 1].v, flat, subbands_[band++].offset);
      copy_block_out(detail[j - 1].d, flat, subbands_[band++].offset);
    }
    return flat;
  }

  Image synthesize(const CoefVec& a) const override {
    check_coefs(a);
    Image cur = copy_block_in(a, subbands_[0].offset, subbands_[0].rows, subbands_[0].cols);
    size_t band = 1;
    for (int j = levels_; j >= 1; --j) {
      Bands b;
      b.ll = std::move(cur);
      b.h = copy_block_in(a, subbands_[band].offset, subbands_[band].rows, subbands_[band].cols);
      ++band;
      b.v = copy_block_in(a, subbands_[band].offset, subbands_[band].rows, subbands_[band].cols);
      ++band;
      b.d = copy_block_in(a, subbands_[band].offset, subbands_[band].rows, subbands_[band].cols);
      ++band;
      cur = synth_level_dec(b, h_, g_);
    }
    return cur;
  }

  double frame_constant() const override { return 1.0; }
  DictionaryKind kind() const override { return DictionaryKind::orthobasis; }
  Index width() const override { return width_; }
  Index height() const override { return height_; }
  Index num_coefficients() const override { return width_ * height_; }
  const std::vector<Subband>& subbands() const override { return subbands_; }
  std::string spec() const override { return "dwt:J=" + std::to_string(levels_); }

 private:
  Index width_, height_;
  int levels_;
  std::string family_;
  Eigen::VectorXd h_, g_;
  std::vector<Subband> subbands_;
};

class TidwtDictionary final : public Dictionary {
 public:
  TidwtDictionary(Index width, Index height, int levels, std::string family)
      : width_(width), height_(height), levels_(levels), family_(std::move(family)),
        h_(wavelets::lowpass(family_)), g_(wavelets::highpass_from_lowpass(h_)) {
    require_dyadic(width, height, levels);
    const Index n = width * height;
    Index offset = 0;
    subbands_.push_back({levels, SubbandKind::approx, offset, height, width});
    offset += n;
    for (int j = levels; j >= 1; --j)
      for (auto kind : {SubbandKind::horizontal, SubbandKind::vertical, SubbandKind::diagonal}) {
        subbands_.push_back({j, kind, offset, height, width});
        offset += n;
      }
  }

  CoefVec analyze(const Image& x) const override {
    check_image(x);
    CoefVec flat(num_coefficients());
    Image cur = x;
    std::vector<Bands> detail(levels_);
    for (int j = 1; j <= levels_; ++j) {
      detail[j - 1] = analyze_level_undec(cur, Index{1} << (j - 1), h_, g_);
      cur = detail[j - 1].ll;
    }
    copy_block_out(cur, flat, subbands_[0].offset);
    size_t band = 1;
    for (int j = levels_; j >= 1; --j) {
      copy_block_out(detail[j - 1].h, flat, subbands_[band++].offset);
      copy_block_out(detail[j - 1].v, flat, subbands_[band++].offset);
      copy_block_out(detail[j - 1].d, flat, subbands_[band++].offset);
    }
    return flat;
  }

  Image synthesize(const CoefVec& a) const override {
    check_coefs(a);
    Image cur = copy_block_in(a, subbands_[0].offset, height_, width_);
    size_t band = 1;
    for (int j = levels_; j >= 1; --j) {
      Bands b;
      b.ll = std::move(cur);
      b.h = copy_block_in(a, subbands_[band++].offset, height_, width_);
      b.v = copy_block_in(a, subbands_[band++].offset, height_, width_);
      b.d = copy_block_in(a, subbands_[band++].offset, height_, width_);
      cur = synth_level_undec(b, Index{1} << (j - 1), h_, g_);
    }
    return cur;
  }

  double frame_constant() const override { return 1.0; }
  DictionaryKind kind() const override { return DictionaryKind::tight_frame; }
  Index width() const override { return width_; }
  Index height() const override { return height_; }
  Index num_coefficients() const override {
    return (3 * static_cast<Index>(levels_) + 1) * width_ * height_;
  }
  const std::vector<Subband>& subbands() const override { return subbands_; }
  std::string spec() const override { return "tidwt:J=" + std::to_string(levels_); }

 private:
  Index width_, height_;
  int levels_;
  std::string family_;
  Eigen::VectorXd h_, g_;
  std::vector<Subband> subbands_;
};

class UnionDictionary final : public Dictionary {
 public:
  explicit UnionDictionary(std::vector<DictionaryPtr> members)
      : members_(std::move(members)) {
    if (members_.empty())
      throw std::invalid_argument("union dictionary: needs at least one member");
    for (const auto& m : members_) {
      if (m->width() != members_[0]->width() || m->height() != members_[0]->height())
        throw std::invalid_argument("union dictionary: member dimension mismatch");
    }
    Index offset = 0;
    double c = 0;
    for (const auto& m : members_) {
      offsets_.push_back(offset);
      for (auto sb : m->subbands()) {
        sb.offset += offset;
        subbands_.push_back(sb);
      }
      offset += m->num_coefficients();
      c += m->frame_constant();
    }
    total_ = offset;
    c_ = c;
  }

  CoefVec analyze(const Image& x) const override {
    check_image(x);
    CoefVec flat(total_);
    for (size_t i = 0; i < members_.size(); ++i)
      flat.segment(offsets_[i], members_[i]->num_coefficients()) = members_[i]->analyze(x);
    return flat;
  }

  Image synthesize(const CoefVec& a) const override {
    check_coefs(a);
    Image out = Image::Zero(height(), width());
    for (size_t i = 0; i < members_.size(); ++i)
      out += members_[i]->synthesize(a.segment(offsets_[i], members_[i]->num_coefficients()));
    return out;
  }

  double frame_constant() const override { return c_; }
  DictionaryKind kind() const override { return DictionaryKind::tight_frame; }
  Index width() const override { return members_[0]->width(); }
  Index height() const override { return members_[0]->height(); }
  Index num_coefficients() const override { return total_; }
  const std::vector<Subband>& subbands() const override { return subbands_; }
  std::string spec() const override {
    std::string s = "union:";
    for (size_t i = 0; i < members_.size(); ++i) {
      if (i) s += "+";
      s += members_[i]->spec();
    }
    return s;
  }

 private:
  std::vector<DictionaryPtr> members_;
  std::vector<Index> offsets_;
  std::vector<Subband> subbands_;
  Index total_ = 0;
  double c_ = 0;
};

class ScaledDictionary final : public Dictionary {
 public:
  ScaledDictionary(DictionaryPtr inner, double gain) : inner_(std::move(inner)), gain_(gain) {
    if (!(gain > 0)) throw std::invalid_argument("scaled dictionary: gain must be > 0");
  }

  CoefVec analyze(const Image& x) const override { return gain_ * inner_->analyze(x); }
  Image synthesize(const CoefVec& a) const override {
    return inner_->synthesize(a) * gain_;
  }
  double frame_constant() const override { return gain_ * gain_ * inner_->frame_constant(); }
  DictionaryKind kind() const override { return DictionaryKind::tight_frame; }
  Index width() const override { return inner_->width(); }
  Index height() const override { return inner_->height(); }
  Index num_coefficients() const override { return inner_->num_coefficients(); }
  const std::vector<Subband>& subbands() const override { return inner_->subbands(); }
  std::string spec() const override {
    std::ostringstream os;
    os << "scale:" << gain_ << ":" << inner_->spec();
    return os.str();
  }

 private:
  DictionaryPtr inner_;
  double gain_;
};

int parse_levels(const std::string& spec, const std::string& head) {
  // Accepts "<head>" (default J=4) or "<head>:J=<j>".
  if (spec == head) return 4;
  const std::string prefix = head + ":J=";
  if (spec.rfind(prefix, 0) != 0)
    throw UsageError("bad dictionary spec '" + spec + "'");
  try {
    size_t pos = 0;
    const int j = std::stoi(spec.substr(prefix.size()), &pos);
    if (pos != spec.size() - prefix.size() || j < 1) throw std::invalid_argument(spec);
    return j;
  } catch (const std::exception&) {
    throw UsageError("bad level count in dictionary spec '" + spec + "'");
  }
}

} // namespace

DictionaryPtr make_identity_dictionary(Index width, Index height) {
  return std::make_shared<IdentityDictionary>(width, height);
}

DictionaryPtr make_dwt_dictionary(Index width, Index height, int levels,
                                  const std::string& family) {
  return std::make_shared<DwtDictionary>(width, height, levels, family);
}

DictionaryPtr make_tidwt_dictionary(Index width, Index height, int levels,
                                    const std::string& family) {
  return std::make_shared<TidwtDictionary>(width, height, levels, family);
}

DictionaryPtr make_union_dictionary(std::vector<DictionaryPtr> members) {
  return std::make_shared<UnionDictionary>(std::move(members));
}

DictionaryPtr make_scaled_dictionary(DictionaryPtr inner, double gain) {
  return std::make_shared<ScaledDictionary>(std::move(inner), gain);
}

DictionaryPtr parse_dictionary_spec(const std::string& spec, Index width, Index height) {
  if (spec == "identity") return make_identity_dictionary(width, height);
  if (spec.rfind("dwt", 0) == 0)
    return make_dwt_dictionary(width, height, parse_levels(spec, "dwt"));
  if (spec.rfind("tidwt", 0) == 0)
    return make_tidwt_dictionary(width, height, parse_levels(spec, "tidwt"));
  if (spec.rfind("union:", 0) == 0) {
    std::vector<DictionaryPtr> members;
    std::stringstream ss(spec.substr(6));
    std::string item;
    while (std::getline(ss, item, '+')) {
      if (item.empty()) throw UsageError("bad union dictionary spec '" + spec + "'");
      if (item.rfind("union:", 0) == 0)
        throw UsageError("nested union dictionary specs are not supported");
      members.push_back(parse_dictionary_spec(item, width, height));
    }
    if (members.empty()) throw UsageError("bad union dictionary spec '" + spec + "'");
    return make_union_dictionary(std::move(members));
  }
  throw UsageError("unknown dictionary spec '" + spec + "'");
}

} // namespace spdeconv
