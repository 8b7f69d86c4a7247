#include "sbdt/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstring>
#include <unordered_map>

// The fast paths follow the classic filtered-predicate scheme: evaluate the
// determinant in binary64 together with a static forward-error bound on the
// permanent of the term magnitudes; when the value clears the bound its sign
// is provably correct, otherwise the computation is redone in exact integer
// arithmetic over suitably scaled inputs (binary64 values are dyadic
// rationals, so a common power-of-two scaling makes them exact integers).
// Error-bound constants follow Shewchuk's analysis of the corresponding
// determinant evaluations.

namespace sbdt {
namespace {

using BigInt = boost::multiprecision::cpp_int;

constexpr double kEps = 0x1.0p-53;
const double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
const double kO3dBound = (7.0 + 56.0 * kEps) * kEps;
const double kIccBound = (10.0 + 96.0 * kEps) * kEps;
const double kIspBound = (16.0 + 224.0 * kEps) * kEps;

// Converts the given doubles into exact integers under a common power-of-two
// scale. Scaling every input by the same positive factor leaves all the
// determinant signs below unchanged.
class ExactScaler {
 public:
  explicit ExactScaler(std::span<const double> values) {
    min_exp_ = 0;
    bool any = false;
    for (double v : values) {
      if (v != 0.0) {
        const int e = std::ilogb(v);
        min_exp_ = any ? std::min(min_exp_, e) : e;
        any = true;
      }
    }
    if (!any) min_exp_ = 0;
  }

  BigInt operator()(double v) const {
    if (v == 0.0) return BigInt(0);
    const int e = std::ilogb(v);
    const auto mant = static_cast<long long>(std::scalbn(v, 52 - e));
    BigInt r(mant);
    r <<= (e - min_exp_);
    return r;
  }

 private:
  int min_exp_;
};

int sign_of(const BigInt& v) { return v.sign(); }

BigInt det2(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d) {
  return a * d - b * c;
}

BigInt det3(const std::array<BigInt, 9>& m) {
  return m[0] * det2(m[4], m[5], m[7], m[8]) - m[1] * det2(m[3], m[5], m[6], m[8]) +
         m[2] * det2(m[3], m[4], m[6], m[7]);
}

BigInt det4(const std::array<BigInt, 16>& m) {
  BigInt r = 0;
  for (int j = 0; j < 4; ++j) {
    std::array<BigInt, 9> minor;
    int idx = 0;
    for (int row = 1; row < 4; ++row) {
      for (int col = 0; col < 4; ++col) {
        if (col == j) continue;
        minor[idx++] = m[4 * row + col];
      }
    }
    const BigInt term = m[j] * det3(minor);
    if (j % 2 == 0) {
      r += term;
    } else {
      r -= term;
    }
  }
  return r;
}

int orient2_exact(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c) {
  const double vals[] = {a[0], a[1], b[0], b[1], c[0], c[1]};
  ExactScaler s(vals);
  const BigInt ax = s(a[0]), ay = s(a[1]);
  return sign_of(det2(s(b[0]) - ax, s(b[1]) - ay, s(c[0]) - ax, s(c[1]) - ay));
}

int orient3_exact(const Vec<3>& a, const Vec<3>& b, const Vec<3>& c, const Vec<3>& d) {
  const double vals[] = {a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2], d[0], d[1], d[2]};
  ExactScaler s(vals);
  std::array<BigInt, 9> m;
  for (int i = 0; i < 3; ++i) {
    const Vec<3>& p = (i == 0) ? b : (i == 1) ? c : d;
    for (int j = 0; j < 3; ++j) m[3 * i + j] = s(p[j]) - s(a[j]);
  }
  return sign_of(det3(m));
}

int in_sphere2_exact(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c, const Vec<2>& q) {
  const double vals[] = {a[0], a[1], b[0], b[1], c[0], c[1], q[0], q[1]};
  ExactScaler s(vals);
  const BigInt qx = s(q[0]), qy = s(q[1]);
  std::array<BigInt, 9> m;
  const Vec<2>* rows[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    const BigInt dx = s((*rows[i])[0]) - qx;
    const BigInt dy = s((*rows[i])[1]) - qy;
    m[3 * i + 0] = dx;
    m[3 * i + 1] = dy;
    m[3 * i + 2] = dx * dx + dy * dy;
  }
  return sign_of(det3(m));
}

int in_sphere3_exact(const Vec<3>& a, const Vec<3>& b, const Vec<3>& c, const Vec<3>& d,
                     const Vec<3>& q) {
  const double vals[] = {a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2],
                         d[0], d[1], d[2], q[0], q[1], q[2]};
  ExactScaler s(vals);
  const BigInt qx = s(q[0]), qy = s(q[1]), qz = s(q[2]);
  std::array<BigInt, 16> m;
  const Vec<3>* rows[4] = {&a, &b, &c, &d};
  for (int i = 0; i < 4; ++i) {
    const BigInt dx = s((*rows[i])[0]) - qx;
    const BigInt dy = s((*rows[i])[1]) - qy;
    const BigInt dz = s((*rows[i])[2]) - qz;
    m[4 * i + 0] = dx;
    m[4 * i + 1] = dy;
    m[4 * i + 2] = dz;
    m[4 * i + 3] = dx * dx + dy * dy + dz * dz;
  }
  // Rows are (p_i - q | lift); with the det(p1-p0,..) orientation convention
  // the inside sign flips in odd lifted dimension.
  return -sign_of(det4(m));
}

}  // namespace

int orient2(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c) {
  const double detleft = (a[0] - c[0]) * (b[1] - c[1]);
  const double detright = (a[1] - c[1]) * (b[0] - c[0]);
  const double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
  }
  const double errbound = kCcwBound * detsum;
  if (det >= errbound) return 1;
  if (-det >= errbound) return -1;
  return orient2_exact(a, b, c);
}

int orient3(const Vec<3>& a, const Vec<3>& b, const Vec<3>& c, const Vec<3>& d) {
  const double adx = a[0] - d[0], ady = a[1] - d[1], adz = a[2] - d[2];
  const double bdx = b[0] - d[0], bdy = b[1] - d[1], bdz = b[2] - d[2];
  const double cdx = c[0] - d[0], cdy = c[1] - d[1], cdz = c[2] - d[2];

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;

  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);

  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * std::fabs(adz) +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * std::fabs(bdz) +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * std::fabs(cdz);
  const double errbound = kO3dBound * permanent;
  // det(a-d, b-d, c-d) has the opposite sign of det(b-a, c-a, d-a).
  if (det > errbound) return -1;
  if (-det > errbound) return 1;
  return orient3_exact(a, b, c, d);
}

int in_sphere2(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c, const Vec<2>& q) {
  assert(orient2(a, b, c) == 1);
  const double adx = a[0] - q[0], ady = a[1] - q[1];
  const double bdx = b[0] - q[0], bdy = b[1] - q[1];
  const double cdx = c[0] - q[0], cdy = c[1] - q[1];

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  const double errbound = kIccBound * permanent;
  if (det > errbound) return 1;
  if (-det > errbound) return -1;
  return in_sphere2_exact(a, b, c, q);
}

int in_sphere3(const Vec<3>& a, const Vec<3>& b, const Vec<3>& c, const Vec<3>& d,
               const Vec<3>& q) {
  assert(orient3(a, b, c, d) == 1);
  const double aex = a[0] - q[0], aey = a[1] - q[1], aez = a[2] - q[2];
  const double bex = b[0] - q[0], bey = b[1] - q[1], bez = b[2] - q[2];
  const double cex = c[0] - q[0], cey = c[1] - q[1], cez = c[2] - q[2];
  const double dex = d[0] - q[0], dey = d[1] - q[1], dez = d[2] - q[2];

  const double aexbey = aex * bey, bexaey = bex * aey;
  const double bexcey = bex * cey, cexbey = cex * bey;
  const double cexdey = cex * dey, dexcey = dex * cey;
  const double dexaey = dex * aey, aexdey = aex * dey;
  const double aexcey = aex * cey, cexaey = cex * aey;
  const double bexdey = bex * dey, dexbey = dex * bey;

  const double ab = aexbey - bexaey;
  const double bc = bexcey - cexbey;
  const double cd = cexdey - dexcey;
  const double da = dexaey - aexdey;
  const double ac = aexcey - cexaey;
  const double bd = bexdey - dexbey;

  const double abc = aez * bc - bez * ac + cez * ab;
  const double bcd = bez * cd - cez * bd + dez * bc;
  const double cda = cez * da + dez * ac + aez * cd;
  const double dab = dez * ab + aez * bd + bez * da;

  const double alift = aex * aex + aey * aey + aez * aez;
  const double blift = bex * bex + bey * bey + bez * bez;
  const double clift = cex * cex + cey * cey + cez * cez;
  const double dlift = dex * dex + dey * dey + dez * dez;

  const double det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd);

  const double aezplus = std::fabs(aez), bezplus = std::fabs(bez);
  const double cezplus = std::fabs(cez), dezplus = std::fabs(dez);
  const double aexbeyplus = std::fabs(aexbey), bexaeyplus = std::fabs(bexaey);
  const double bexceyplus = std::fabs(bexcey), cexbeyplus = std::fabs(cexbey);
  const double cexdeyplus = std::fabs(cexdey), dexceyplus = std::fabs(dexcey);
  const double dexaeyplus = std::fabs(dexaey), aexdeyplus = std::fabs(aexdey);
  const double aexceyplus = std::fabs(aexcey), cexaeyplus = std::fabs(cexaey);
  const double bexdeyplus = std::fabs(bexdey), dexbeyplus = std::fabs(dexbey);

  const double permanent =
      ((cexdeyplus + dexceyplus) * bezplus + (dexbeyplus + bexdeyplus) * cezplus +
       (bexceyplus + cexbeyplus) * dezplus) *
          alift +
      ((dexaeyplus + aexdeyplus) * cezplus + (aexceyplus + cexaeyplus) * dezplus +
       (cexdeyplus + dexceyplus) * aezplus) *
          blift +
      ((aexbeyplus + bexaeyplus) * dezplus + (bexdeyplus + dexbeyplus) * aezplus +
       (dexaeyplus + aexdeyplus) * bezplus) *
          clift +
      ((bexceyplus + cexbeyplus) * aezplus + (cexaeyplus + aexceyplus) * bezplus +
       (aexbeyplus + bexaeyplus) * cezplus) *
          dlift;
  const double errbound = kIspBound * permanent;
  // This evaluation is positive for "inside" when det(a-e,b-e,c-e) style
  // orientation is positive, i.e. the opposite of our orient convention.
  if (det > errbound) return -1;
  if (-det > errbound) return 1;
  return in_sphere3_exact(a, b, c, d, q);
}

template <>
Sphere<2> circumsphere<2>(const std::array<Vec<2>, 3>& p) {
  if (orient2(p[0], p[1], p[2]) == 0) throw DegenerateSimplex();
  const double ux = p[1][0] - p[0][0], uy = p[1][1] - p[0][1];
  const double vx = p[2][0] - p[0][0], vy = p[2][1] - p[0][1];
  const double bu = 0.5 * (ux * ux + uy * uy);
  const double bv = 0.5 * (vx * vx + vy * vy);
  const double det = ux * vy - uy * vx;
  const double cx = (bu * vy - bv * uy) / det;
  const double cy = (ux * bv - vx * bu) / det;
  Sphere<2> s;
  s.center = {p[0][0] + cx, p[0][1] + cy};
  s.radius_squared = cx * cx + cy * cy;
  return s;
}

template <>
Sphere<3> circumsphere<3>(const std::array<Vec<3>, 4>& p) {
  if (orient3(p[0], p[1], p[2], p[3]) == 0) throw DegenerateSimplex();
  double m[3][3];
  double rhs[3];
  for (int i = 0; i < 3; ++i) {
    double n2 = 0;
    for (int d = 0; d < 3; ++d) {
      m[i][d] = p[i + 1][d] - p[0][d];
      n2 += m[i][d] * m[i][d];
    }
    rhs[i] = 0.5 * n2;
  }
  // Cramer's rule on the 3x3 bisector system.
  auto det3x3 = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double det = det3x3(m);
  Vec<3> rel;
  for (int col = 0; col < 3; ++col) {
    double mc[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) mc[i][j] = (j == col) ? rhs[i] : m[i][j];
    }
    rel[col] = det3x3(mc) / det;
  }
  Sphere<3> s;
  for (int d = 0; d < 3; ++d) s.center[d] = p[0][d] + rel[d];
  s.radius_squared = rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2];
  return s;
}

template <int D>
bool halfspace_box_overlap(const std::array<Vec<D>, D>& facet, const Vec<D>& inner_point,
                           const Box<D>& box) {
  std::array<Vec<D>, D + 1> pts;
  for (int i = 0; i < D; ++i) pts[i] = facet[i];
  pts[D] = inner_point;
  const int inner_sign = orient<D>(pts);
  assert(inner_sign != 0 && "facet plane through the reference point");
  for (unsigned corner = 0; corner < (1u << D); ++corner) {
    for (int d = 0; d < D; ++d) {
      pts[D][d] = (corner & (1u << d)) ? box.hi[d] : box.lo[d];
    }
    const int s = orient<D>(pts);
    if (s != 0 && s != inner_sign) return true;
  }
  return false;
}

template bool halfspace_box_overlap<2>(const std::array<Vec<2>, 2>&, const Vec<2>&, const Box<2>&);
template bool halfspace_box_overlap<3>(const std::array<Vec<3>, 3>&, const Vec<3>&, const Box<3>&);

std::vector<PointId> PointSet::deduplicate() {
  const std::size_t n = size();
  std::vector<PointId> remap(n);
  std::vector<double> kept;
  kept.reserve(coords_.size());
  // Hash full coordinate tuples; equality is verified on collision.
  std::unordered_map<std::uint64_t, std::vector<PointId>> buckets;
  buckets.reserve(n * 2);
  PointId next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = coords_.data() + i * dim_;
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int d = 0; d < dim_; ++d) {
      std::uint64_t bits;
      std::memcpy(&bits, &p[d], sizeof(bits));
      h = mix64(h ^ bits);
    }
    PointId found = kInfiniteVertex;
    auto it = buckets.find(h);
    if (it != buckets.end()) {
      for (PointId cand : it->second) {
        if (std::equal(p, p + dim_, kept.data() + std::size_t(cand) * dim_)) {
          found = cand;
          break;
        }
      }
    }
    if (found != kInfiniteVertex) {
      remap[i] = found;
    } else {
      kept.insert(kept.end(), p, p + dim_);
      buckets[h].push_back(next);
      remap[i] = next;
      ++next;
    }
  }
  coords_ = std::move(kept);
  return remap;
}

}  // namespace sbdt
