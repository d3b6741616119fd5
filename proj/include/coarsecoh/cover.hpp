#pragma once

// Coarse covers and the cocontrolled-tuple oracle. Every verdict is a sweep
// over scales R with the window margin rule from subsets.hpp; the oracle
// caches results per (block set, R) since nerve construction asks the same
// questions many times.

#include "coarsecoh/space.hpp"
#include "coarsecoh/subsets.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace coarsecoh {

/// Shared evaluation state for one space and sweep: the enumerated window,
/// subset masks, and tuple verdicts. Safe for concurrent use.
class CoarseContext {
public:
  CoarseContext(SpaceModel space, Sweep sweep = {}) : space_(std::move(space)), sweep_(std::move(sweep)) {
    require(!sweep_.scales.empty(), ErrorKind::InvalidArgument, "sweep needs at least one scale");
    for (Dist r : sweep_.scales) require(r >= 0, ErrorKind::InvalidArgument, "sweep scales must be nonnegative");
  }

  const SpaceModel &space() const { return space_; }
  const Sweep &sweep() const { return sweep_; }

  const WindowIndex &index() const {
    std::call_once(indexOnce_, [&] { index_ = std::make_unique<WindowIndex>(space_, sweep_.pointCap); });
    return *index_;
  }

  const Mask &mask(const SubsetExpr &e) const {
    {
      std::lock_guard lock(mutex_);
      auto it = masks_.find(e.text());
      if (it != masks_.end()) return *it->second;
    }
    auto m = std::make_unique<Mask>(evaluateMask(e, index(), sweep_.jobs));
    std::lock_guard lock(mutex_);
    auto [it, inserted] = masks_.emplace(e.text(), std::move(m));
    return *it->second;
  }

  /// Points within distance R of the subset.
  const Mask &near(const SubsetExpr &e, Dist r) const { return mask(SubsetExpr::thicken(e, r)); }

  template <class T>
  std::shared_ptr<const T> lookup(const std::string &key) const {
    std::lock_guard lock(mutex_);
    auto it = memo_.find(key);
    if (it == memo_.end()) return nullptr;
    return std::static_pointer_cast<const T>(it->second);
  }

  template <class T>
  void store(const std::string &key, std::shared_ptr<const T> value) const {
    std::lock_guard lock(mutex_);
    memo_.emplace(key, std::move(value));
  }

private:
  SpaceModel space_;
  Sweep sweep_;
  mutable std::once_flag indexOnce_;
  mutable std::unique_ptr<WindowIndex> index_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::unique_ptr<Mask>> masks_;
  mutable std::map<std::string, std::shared_ptr<const void>> memo_;
};

enum class Tri { Yes, No, Inconclusive };

inline std::string_view toString(Tri t) {
  switch (t) {
  case Tri::Yes: return "yes";
  case Tri::No: return "no";
  case Tri::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct ScaleRow {
  Dist scale = 0;
  BoundednessCertificate cert;
};

/// Folds per-scale certificates: Yes iff all bounded, No iff any unbounded.
inline Tri aggregate(const std::vector<ScaleRow> &rows) {
  bool inconclusive = false;
  for (const auto &r : rows) {
    if (r.cert.unbounded()) return Tri::No;
    if (!r.cert.bounded()) inconclusive = true;
  }
  return inconclusive ? Tri::Inconclusive : Tri::Yes;
}

struct CoverVerdict {
  Tri isCover = Tri::Inconclusive;
  std::vector<ScaleRow> rows;
  bool exact = false;
};

/// The set thickened complements meet in, relative to U, at scale R.
inline SubsetExpr coverCore(const SubsetExpr &u, const std::vector<SubsetExpr> &parts, Dist r) {
  std::vector<SubsetExpr> terms{u};
  for (const auto &p : parts) terms.push_back(SubsetExpr::thicken(u & !p, r));
  return SubsetExpr::intersection(std::move(terms));
}

inline CoverVerdict isCoarseCover(const SubsetExpr &u, const std::vector<SubsetExpr> &parts,
                                  const CoarseContext &ctx) {
  require(!parts.empty(), ErrorKind::InvalidArgument, "a cover needs at least one part");
  CoverVerdict out;
  out.exact = true;
  for (Dist r : ctx.sweep().scales) {
    SubsetExpr core = coverCore(u, parts, r);
    std::optional<BoundednessCertificate> cert;
    if (ctx.sweep().symbolic)
      if (auto boxes = toBoxes(core, ctx.space())) cert = boundednessOfBoxes(*boxes, ctx.space(), ctx.sweep());
    if (!cert) {
      out.exact = false;
      cert = boundednessOfMask(ctx.mask(core), ctx.index(), ctx.sweep());
    }
    out.rows.push_back({r, *cert});
  }
  out.isCover = aggregate(out.rows);
  return out;
}

struct DisjointUnionVerdict {
  Tri result = Tri::Inconclusive;
  bool disjoint = true;
  std::optional<std::pair<std::size_t, std::size_t>> overlappingParts;
  std::optional<Point> overlapWitness;
  CoverVerdict cover;
};

inline DisjointUnionVerdict isCoarseDisjointUnion(const std::vector<SubsetExpr> &parts, const SubsetExpr &u,
                                                  const CoarseContext &ctx) {
  DisjointUnionVerdict out;
  const auto &index = ctx.index();
  for (std::size_t i = 0; i < parts.size() && out.disjoint; ++i)
    for (std::size_t j = i + 1; j < parts.size() && out.disjoint; ++j) {
      const Mask &a = ctx.mask(parts[i] & u);
      const Mask &b = ctx.mask(parts[j] & u);
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] && b[k]) {
          out.disjoint = false;
          out.overlappingParts = {i, j};
          out.overlapWitness = index.point(k);
          break;
        }
    }
  out.cover = isCoarseCover(u, parts, ctx);
  if (!out.disjoint) out.result = Tri::No;
  else out.result = out.cover.isCover;
  return out;
}

struct TupleControlVerdict {
  std::vector<std::string> blocks;
  Tri cocontrolled = Tri::Inconclusive;
  std::vector<ScaleRow> rows;
};

namespace detail {

/// Largest norm among tuples (x_0..x_k) with x_j in block j and pairwise
/// distances <= R. Returns -1 when there is no such tuple; fills `witness`.
inline Dist tupleReach(const std::vector<const Mask *> &blocks, const std::vector<const Mask *> &nearBlocks,
                       Dist r, const WindowIndex &index, std::vector<Point> &witness) {
  const std::size_t k = blocks.size();
  const auto &nb = index.neighbors(r);
  Dist best = -1;
  std::vector<std::size_t> chosen;

  std::function<bool(std::size_t, std::size_t)> extend = [&](std::size_t anchorBlock, std::size_t depth) -> bool {
    if (chosen.size() == k) return true;
    std::size_t block = depth >= anchorBlock ? depth + 1 : depth;
    const Mask &m = *blocks[block];
    for (auto cand : nb.of(chosen.front())) {
      if (!m[cand]) continue;
      bool ok = true;
      for (std::size_t c = 1; c < chosen.size() && ok; ++c) ok = index.distance(chosen[c], cand) <= r;
      if (!ok) continue;
      chosen.push_back(cand);
      if (extend(anchorBlock, depth + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };

  for (std::size_t j = 0; j < k; ++j) {
    std::vector<std::size_t> anchors;
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (!(*blocks[j])[i] || index.norm(i) <= best) continue;
      bool ok = true;
      for (std::size_t l = 0; l < k && ok; ++l)
        if (l != j) ok = (*nearBlocks[l])[i];
      if (ok) anchors.push_back(i);
    }
    std::sort(anchors.begin(), anchors.end(), [&](std::size_t a, std::size_t b) {
      return index.norm(a) != index.norm(b) ? index.norm(a) > index.norm(b) : a < b;
    });
    for (auto a : anchors) {
      if (index.norm(a) <= best) break;
      chosen.assign(1, a);
      if (k == 1 || extend(j, 0)) {
        best = index.norm(a);
        witness.clear();
        // Report the tuple in block order.
        std::vector<Point> ordered(k);
        ordered[j] = index.point(chosen[0]);
        for (std::size_t d = 1; d < chosen.size(); ++d) {
          std::size_t depth = d - 1;
          ordered[depth >= j ? depth + 1 : depth] = index.point(chosen[d]);
        }
        witness = std::move(ordered);
        break;
      }
    }
  }
  return best;
}

} // namespace detail

/// Decides whether the product of the blocks is cocontrolled. Repeated
/// blocks and block order do not matter, so the query is canonicalized.
inline TupleControlVerdict isCocontrolledTuple(const std::vector<SubsetExpr> &blocks, const CoarseContext &ctx) {
  require(!blocks.empty(), ErrorKind::InvalidArgument, "tuple needs at least one block");
  std::map<std::string, SubsetExpr> distinct;
  for (const auto &b : blocks) distinct.emplace(b.text(), b);
  std::string key = "tuple|";
  for (const auto &[text, e] : distinct) key += text + "|";
  if (auto hit = ctx.lookup<TupleControlVerdict>(key)) return *hit;

  TupleControlVerdict out;
  std::vector<SubsetExpr> exprs;
  for (const auto &[text, e] : distinct) {
    out.blocks.push_back(text);
    exprs.push_back(e);
  }
  const auto &index = ctx.index();
  std::vector<const Mask *> masks;
  for (const auto &e : exprs) masks.push_back(&ctx.mask(e));
  for (Dist r : ctx.sweep().scales) {
    std::vector<const Mask *> nearMasks;
    for (const auto &e : exprs) nearMasks.push_back(&ctx.near(e, r));
    std::vector<Point> witness;
    Dist reach = detail::tupleReach(masks, nearMasks, r, index, witness);
    ScaleRow row;
    row.scale = r;
    row.cert.windowRadius = index.space().windowRadius();
    row.cert.scales = ctx.sweep().scales;
    row.cert.bound = std::max<Dist>(reach, 0);
    row.cert.verdict = classifyRadius(row.cert.bound, row.cert.windowRadius, ctx.sweep());
    if (row.cert.unbounded()) row.cert.witnesses = std::move(witness);
    out.rows.push_back(std::move(row));
  }
  out.cocontrolled = aggregate(out.rows);
  ctx.store(key, std::make_shared<const TupleControlVerdict>(out));
  return out;
}

/// Bound on (q+1)-tuples of U-points within pairwise distance R that no
/// single part contains entirely.
inline BoundednessCertificate complementUnionBound(const SubsetExpr &u, const std::vector<SubsetExpr> &parts,
                                                   int q, Dist r, const CoarseContext &ctx) {
  require(q >= 0, ErrorKind::InvalidArgument, "degree must be >= 0");
  require(!parts.empty() && parts.size() <= 64, ErrorKind::InvalidArgument, "between 1 and 64 parts supported");
  const auto &index = ctx.index();
  const Mask &um = ctx.mask(u);
  std::vector<std::uint64_t> membership(index.size(), 0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Mask &m = ctx.mask(parts[p]);
    for (std::size_t i = 0; i < index.size(); ++i)
      if (m[i]) membership[i] |= std::uint64_t{1} << p;
  }
  const auto &nb = index.neighbors(r);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < index.size(); ++i)
    if (um[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return index.norm(a) != index.norm(b) ? index.norm(a) > index.norm(b) : a < b;
  });

  std::vector<std::size_t> chosen;
  std::function<bool(std::uint64_t)> search = [&](std::uint64_t common) -> bool {
    if (common == 0) return true;
    if (static_cast<int>(chosen.size()) == q + 1) return false;
    for (auto cand : nb.of(chosen.front())) {
      if (!um[cand] || (membership[cand] & common) == common) continue;
      bool ok = true;
      for (std::size_t c = 1; c < chosen.size() && ok; ++c) ok = index.distance(chosen[c], cand) <= r;
      if (!ok) continue;
      chosen.push_back(cand);
      if (search(common & membership[cand])) return true;
      chosen.pop_back();
    }
    return false;
  };

  BoundednessCertificate cert;
  cert.windowRadius = index.space().windowRadius();
  cert.scales = ctx.sweep().scales;
  for (auto a : order) {
    chosen.assign(1, a);
    if (search(membership[a])) {
      cert.bound = index.norm(a);
      for (auto c : chosen) cert.witnesses.push_back(index.point(c));
      break;
    }
  }
  cert.verdict = classifyRadius(cert.bound, cert.windowRadius, ctx.sweep());
  if (!cert.unbounded()) cert.witnesses.clear();
  return cert;
}

} // namespace coarsecoh
