// Finite-window module structure: exact generator matrices, invariance and
// connectivity certificates, composition-series reports.
#include "sl2rep/structure.hpp"

#include <cstddef>
#include <queue>
#include <stdexcept>

#include "sl2rep/ktypes.hpp"

namespace sl2rep {

namespace {

constexpr GeneratorTag kMatrixGens[] = {
    GeneratorTag::kappa, GeneratorTag::eta_plus, GeneratorTag::eta_minus,
    GeneratorTag::E_plus, GeneratorTag::E_minus};

std::string boundary_caveat(const TruncatedModule& mod) {
  int boundary = 0;
  for (bool b : mod.boundary_mask) boundary += b ? 1 : 0;
  return "claims are certified on the window interior; " +
         std::to_string(boundary) +
         " of " + std::to_string(mod.basis.size()) +
         " basis vectors touch the window boundary and are excluded";
}

}  // namespace

ExtremalInfo detect_extremal(int q, int l) {
  if (l < 0) throw std::invalid_argument("detect_extremal: degree must be nonnegative");
  int qq = ((q % 4) + 4) % 4;
  if (qq == 1) return {Extremal::kLowest, 2 * l + 1};
  if (qq == 3) return {Extremal::kHighest, -(2 * l + 1)};
  return {Extremal::kNone, 0};
}

int TruncatedModule::position(const KTypeIndex& idx) const {
  if (idx.q != window.q) return -1;
  auto it = positions_.find({idx.l, idx.m});
  return it == positions_.end() ? -1 : it->second;
}

TruncatedModule build_truncated(const Window& window) {
  if (window.q < 0 || window.q > 3)
    throw std::invalid_argument("build_truncated: parity class must lie in 0..3");
  if (window.l_max < 2 || window.m_bound < 2 * window.l_max + 5)
    throw std::invalid_argument(
        "build_truncated: window too small for extremal weights "
        "(need l_max >= 2 and m_bound >= 2*l_max + 5)");

  TruncatedModule mod;
  mod.window = window;
  for (int l = 0; l <= window.l_max; ++l) {
    for (int m : weights(window.q, l, -window.m_bound, window.m_bound)) {
      mod.positions_[{l, m}] = static_cast<int>(mod.basis.size());
      mod.basis.push_back({window.q, l, m});
    }
  }
  mod.boundary_mask.assign(mod.basis.size(), false);
  for (GeneratorTag gen : kMatrixGens) mod.matrices[gen];
  for (std::size_t j = 0; j < mod.basis.size(); ++j) {
    for (GeneratorTag gen : kMatrixGens) {
      for (const LadderTerm& term : ladder_terms(gen, mod.basis[j])) {
        if (!term.coeff.is_real())
          throw std::logic_error("build_truncated: nonreal ladder coefficient");
        int row = mod.position(term.target);
        if (row < 0) {
          mod.boundary_mask[j] = true;
          continue;
        }
        mod.matrices[gen][{row, static_cast<int>(j)}] = term.coeff.re;
      }
    }
  }
  return mod;
}

InvarianceReport verify_invariance(const TruncatedModule& module,
                                   const IndexPredicate& subspace) {
  InvarianceReport report;
  for (std::size_t j = 0; j < module.basis.size(); ++j) {
    if (module.boundary_mask[j] || !subspace(module.basis[j])) continue;
    ++report.interior_members;
    // Interior vectors have every ladder target inside the window, so the
    // ladder terms coincide with the matrix column.
    for (GeneratorTag gen : kMatrixGens) {
      for (const LadderTerm& term : ladder_terms(gen, module.basis[j])) {
        if (!subspace(term.target)) {
          report.invariant = false;
          report.violations.push_back({module.basis[j], gen, term.target});
        }
      }
    }
  }
  return report;
}

QuotientReport verify_irreducible_quotient(const TruncatedModule& module,
                                           const IndexPredicate& sub,
                                           const IndexPredicate& super) {
  std::vector<int> verts;
  std::vector<int> vert_of(module.basis.size(), -1);
  for (std::size_t j = 0; j < module.basis.size(); ++j) {
    if (module.boundary_mask[j]) continue;
    const KTypeIndex& idx = module.basis[j];
    if (super(idx) && !sub(idx)) {
      vert_of[j] = static_cast<int>(verts.size());
      verts.push_back(static_cast<int>(j));
    }
  }
  QuotientReport report;
  report.interior_vertices = static_cast<int>(verts.size());
  if (verts.size() <= 1) return report;  // nothing to separate

  // Directed edges are the nonzero matrix entries between quotient
  // vertices; images landing in the submodule are projected away, which
  // here just means their endpoints are not vertices.
  std::vector<std::vector<int>> fwd(verts.size()), bwd(verts.size());
  for (const auto& [gen, entries] : module.matrices) {
    (void)gen;
    for (const auto& [key, coeff] : entries) {
      (void)coeff;
      int row = vert_of[static_cast<std::size_t>(key.first)];
      int col = vert_of[static_cast<std::size_t>(key.second)];
      if (row >= 0 && col >= 0 && row != col) {
        fwd[col].push_back(row);
        bwd[row].push_back(col);
      }
    }
  }
  auto reachable = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(verts.size(), 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          queue.push(w);
        }
      }
    }
    return seen;
  };
  auto forward = reachable(fwd);
  auto backward = reachable(bwd);
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (!forward[v] || !backward[v]) {
      report.strongly_connected = false;
      report.unreachable.push_back(module.basis[static_cast<std::size_t>(verts[v])]);
    }
  }
  return report;
}

SeriesReport composition_series(int q, int l_max, int m_bound) {
  TruncatedModule mod = build_truncated({q, l_max, m_bound});

  SeriesReport report;
  report.q = q;
  report.window = mod.window;
  report.boundary_caveats.push_back(boundary_caveat(mod));

  IndexPredicate none = [](const KTypeIndex&) { return false; };
  IndexPredicate all = [](const KTypeIndex&) { return true; };
  IndexPredicate low = [](const KTypeIndex& i) { return i.l <= 1; };
  IndexPredicate plus = [](const KTypeIndex& i) { return i.m >= 2 * i.l + 1; };
  IndexPredicate minus = [](const KTypeIndex& i) { return i.m <= -(2 * i.l + 1); };

  struct Member {
    std::string name;
    IndexPredicate pred;
  };
  std::vector<Member> members;
  struct Subquotient {
    std::string name;
    IndexPredicate sub, super;
  };
  std::vector<Subquotient> quotients;

  if (q == 0 || q == 2) {
    members.push_back({"H_0 + H_1", low});
    members.push_back({"H", all});
    quotients.push_back({"H_0 + H_1", none, low});
    quotients.push_back({"H / (H_0 + H_1)", low, all});
    for (int l = 0; l <= l_max; ++l) {
      if (detect_extremal(q, l).kind != Extremal::kNone)
        throw std::logic_error("composition_series: unexpected extremal weight at even q");
    }
    report.boundary_caveats.push_back(
        "no degree l <= " + std::to_string(l_max) +
        " carries an extremal weight in this parity class");
  } else {
    // The invariant one-sided spans for q = 1 are the lowest-weight ladders
    // m >= 2l+1; for q = 3 the highest-weight ladders m <= -(2l+1).  The
    // mirrored labeling is checked below and reported in the caveats.
    bool lowest = (q == 1);
    IndexPredicate side = lowest ? plus : minus;
    std::string tag = lowest ? "^+" : "^-";
    std::string desc = lowest ? "lowest-weight ladders, m >= 2l+1"
                              : "highest-weight ladders, m <= -(2l+1)";
    IndexPredicate bottom = [low, side](const KTypeIndex& i) { return low(i) && side(i); };
    IndexPredicate third = [low, side](const KTypeIndex& i) { return low(i) || side(i); };
    members.push_back({"H_0" + tag + " + H_1" + tag + " (" + desc + ")", bottom});
    members.push_back({"H_0 + H_1", low});
    members.push_back({"H_0 + H_1 + H" + tag + " (adding the l >= 2 ladders)", third});
    members.push_back({"H", all});
    quotients.push_back({"H_0" + tag + " + H_1" + tag, none, bottom});
    quotients.push_back({"(H_0 + H_1) / (H_0" + tag + " + H_1" + tag + ")", bottom, low});
    quotients.push_back({"(H_0 + H_1 + H" + tag + ") / (H_0 + H_1)", low, third});
    quotients.push_back({"H / (H_0 + H_1 + H" + tag + ")", third, all});

    IndexPredicate mirror_side = lowest ? minus : plus;
    IndexPredicate mirror =
        [low, mirror_side](const KTypeIndex& i) { return low(i) && mirror_side(i); };
    InvarianceReport mirror_report = verify_invariance(mod, mirror);
    std::string mtag = lowest ? "^-" : "^+";
    if (mirror_report.invariant) {
      report.boundary_caveats.push_back(
          "the mirrored labeling H_0" + mtag + " + H_1" + mtag +
          " is also invariant on this window");
    } else {
      report.boundary_caveats.push_back(
          "the mirrored labeling H_0" + mtag + " + H_1" + mtag + " is not invariant (" +
          std::to_string(mirror_report.violations.size()) +
          " violating edges); the chain uses the " + desc);
    }
  }

  auto dim_of = [&](const IndexPredicate& pred) {
    int dim = 0;
    for (const KTypeIndex& idx : mod.basis) dim += pred(idx) ? 1 : 0;
    return dim;
  };

  for (const Member& member : members) {
    InvarianceReport inv = verify_invariance(mod, member.pred);
    report.chain.push_back(
        {member.name, dim_of(member.pred), inv.invariant, inv.violations});
  }

  // Inclusion 0: the first member is nonzero; inclusion i >= 1: member i-1
  // sits strictly inside member i.
  report.verified_inclusions.push_back(report.chain.front().dim_in_window > 0);
  for (std::size_t i = 1; i < members.size(); ++i) {
    bool contained = true;
    for (const KTypeIndex& idx : mod.basis) {
      if (members[i - 1].pred(idx) && !members[i].pred(idx)) {
        contained = false;
        break;
      }
    }
    bool strict =
        report.chain[i - 1].dim_in_window < report.chain[i].dim_in_window;
    report.verified_inclusions.push_back(contained && strict);
  }

  for (const Subquotient& quotient : quotients) {
    QuotientReport conn = verify_irreducible_quotient(mod, quotient.sub, quotient.super);
    report.subquotients.push_back(
        {quotient.name, conn.strongly_connected, conn.interior_vertices});
    if (conn.interior_vertices == 0) {
      report.boundary_caveats.push_back(
          "subquotient '" + quotient.name +
          "' has no interior vertices at this window; its connectivity is "
          "vacuous and should be read as unverifiable, not verified");
    }
  }

  return report;
}

}  // namespace sl2rep
