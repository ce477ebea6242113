#include "cubeterm/blocker.hpp"

#include <algorithm>

namespace cubeterm {

namespace {

/// Per-operation least U-absorbing variable within the subalgebra on B, or
/// nullopt if some operation has none.
std::optional<std::vector<int>> absorption_certificate(const InducedSubalgebra& on_b, const Subset& u_restricted) {
    std::vector<int> cert(on_b.algebra.op_count(), -1);
    for (size_t op = 0; op < on_b.algebra.op_count(); ++op) {
        for (int v = 0; v < on_b.algebra.arity(op); ++v) {
            if (is_absorbing(on_b.algebra, op, v, u_restricted)) {
                cert[op] = v;
                break;
            }
        }
        if (cert[op] < 0) return std::nullopt;
    }
    return cert;
}

} // namespace

Blocker make_blocker(const FiniteAlgebra& algebra, const Subset& u, const Subset& b) {
    if (u.empty()) raise(Errc::ImproperBase, "U must be nonempty");
    if (!u.is_subset_of(b) || u == b) raise(Errc::ImproperBase, "U must be a proper subset of B");
    if (!is_subuniverse(algebra, u)) raise(Errc::InvalidArgument, "U is not a subuniverse");
    if (!is_subuniverse(algebra, b)) raise(Errc::InvalidArgument, "B is not a subuniverse");
    auto on_b = induced_subalgebra(algebra, b);
    auto cert = absorption_certificate(on_b, on_b.restrict(u));
    if (!cert)
        raise(Errc::InvalidArgument, "(U, B) is not a blocker: some operation on B has no U-absorbing variable");
    return Blocker{u, b, std::move(*cert)};
}

bool verify_blocker(const FiniteAlgebra& algebra, const Blocker& blocker) {
    if (blocker.u.empty() || !blocker.u.is_subset_of(blocker.b) || blocker.u == blocker.b) return false;
    if (!is_subuniverse(algebra, blocker.u) || !is_subuniverse(algebra, blocker.b)) return false;
    if (blocker.absorbing_variable.size() != algebra.op_count()) return false;
    auto on_b = induced_subalgebra(algebra, blocker.b);
    Subset u = on_b.restrict(blocker.u);
    for (size_t op = 0; op < algebra.op_count(); ++op) {
        int v = blocker.absorbing_variable[op];
        if (v < 0 || v >= algebra.arity(op)) return false;
        if (!is_absorbing(on_b.algebra, op, v, u)) return false;
    }
    return true;
}

std::optional<Blocker> find_blocker(const FiniteAlgebra& algebra, int cap) {
    auto subs = all_subuniverses(algebra, cap);  // sorted by (size, bit pattern)
    for (const auto& b : subs) {
        if (b.size() < 2) continue;
        auto on_b = induced_subalgebra(algebra, b);
        for (const auto& u : subs) {
            if (u.size() >= b.size() || !u.is_subset_of(b)) continue;
            auto cert = absorption_certificate(on_b, on_b.restrict(u));
            if (cert) return Blocker{u, b, std::move(*cert)};
        }
    }
    return std::nullopt;
}

Blocker blocker_preimage(const Homomorphism& hom, const Blocker& of_target) {
    if (!hom.is_surjective()) raise(Errc::InvalidArgument, "blocker preimage requires a surjective homomorphism");
    Subset u = hom.preimage(of_target.u);
    Subset b = hom.preimage(of_target.b);
    return make_blocker(hom.source(), u, b);
}

FactorBlocker blocker_of_factor(const ProductAlgebra& prod, const Blocker& of_product) {
    const FiniteAlgebra& a = prod.first_projection.target();
    const FiniteAlgebra& c = prod.second_projection.target();
    Subset im_u = prod.first_projection.image(of_product.u);
    Subset im_b = prod.first_projection.image(of_product.b);
    if (!(im_u == im_b)) {
        return FactorBlocker{0, 1, make_blocker(a, im_u, im_b)};
    }
    // Slice case: pick the least (a0, c0) in B - U; a0 also appears in U, so
    // V = {a0} x C meets U properly inside B, and the second projection of
    // (U ∩ V, B ∩ V) is a blocker of the second factor.
    const int kc = c.size();
    int witness = -1;
    for (int e = 0; e < prod.algebra.size(); ++e) {
        if (of_product.b.contains(e) && !of_product.u.contains(e)) {
            witness = e;
            break;
        }
    }
    if (witness < 0) raise(Errc::InvalidArgument, "blocker has B = U");
    int a0 = witness / kc;
    Subset u_c(kc), b_c(kc);
    for (int y = 0; y < kc; ++y) {
        int e = a0 * kc + y;
        if (of_product.u.contains(e)) u_c.add(y);
        if (of_product.b.contains(e)) b_c.add(y);
    }
    return FactorBlocker{1, 2, make_blocker(c, u_c, b_c)};
}

SemilatticeSection semilattice_section(const FiniteAlgebra& algebra, const Blocker& blocker) {
    auto on_b = induced_subalgebra(algebra, blocker.b);
    Subset u = on_b.restrict(blocker.u);
    for (size_t op = 0; op < on_b.algebra.op_count(); ++op)
        for (int v = 0; v < on_b.algebra.arity(op); ++v)
            if (!is_absorbing(on_b.algebra, op, v, u))
                raise(Errc::NotFullyAbsorbing, "operation '" + algebra.signature()[op].name +
                                                   "' is not U-absorbing in variable " + std::to_string(v));
    // least t in B \ U, in the original numbering
    int t_original = -1;
    for (int e : blocker.b.elements()) {
        if (!blocker.u.contains(e)) {
            t_original = e;
            break;
        }
    }
    int t_local = on_b.index_of[static_cast<size_t>(t_original)];

    // S = U ∪ {t} is a subuniverse: any argument from U forces the result
    // into U, and the all-t input returns t.
    std::vector<int> s_local = u.elements();
    s_local.push_back(t_local);
    std::sort(s_local.begin(), s_local.end());
    Subset s_set(on_b.algebra.size());
    for (int e : s_local) s_set.add(e);
    if (!is_subuniverse(on_b.algebra, s_set))
        raise(Errc::Inconsistent, "U ∪ {t} failed to be a subuniverse despite full absorption");

    auto cls = [&](int local) { return local == t_local ? 1 : 0; };

    // Verify the quotient collapses to w(x...) = 1 iff all arguments are 1,
    // exhaustively over S, and build the 2-element tables.
    std::vector<std::vector<int>> tables(on_b.algebra.op_count());
    for (size_t op = 0; op < on_b.algebra.op_count(); ++op) {
        const int n = on_b.algebra.arity(op);
        tables[op].assign(size_t{1} << n, 0);
        std::vector<size_t> pick(static_cast<size_t>(n), 0);
        std::vector<int> args(static_cast<size_t>(n), 0);
        while (true) {
            bool all_top = true;
            size_t idx = 0;
            for (int i = 0; i < n; ++i) {
                args[static_cast<size_t>(i)] = s_local[pick[static_cast<size_t>(i)]];
                int ci = cls(args[static_cast<size_t>(i)]);
                all_top = all_top && ci == 1;
                idx = idx * 2 + static_cast<size_t>(ci);
            }
            int out_cls = cls(on_b.algebra.apply(op, args));
            if (out_cls != (all_top ? 1 : 0))
                raise(Errc::Inconsistent, "quotient is not the expected 2-element semilattice");
            tables[op][idx] = out_cls;
            int pos = n - 1;
            while (pos >= 0 && ++pick[static_cast<size_t>(pos)] == s_local.size()) {
                pick[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }

    SemilatticeSection out{FiniteAlgebra(2, algebra.signature(), std::move(tables)), {}, {}, t_original};
    for (int local : s_local) {
        out.section_elements.push_back(on_b.elements[static_cast<size_t>(local)]);
        out.class_of.push_back(cls(local));
    }
    return out;
}

} // namespace cubeterm
