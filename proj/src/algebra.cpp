#include "cubeterm/algebra.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace cubeterm {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotIdempotent: return "NotIdempotent";
        case Errc::TableOutOfRange: return "TableOutOfRange";
        case Errc::EntryOutOfRange: return "EntryOutOfRange";
        case Errc::BadSignature: return "BadSignature";
        case Errc::SearchCapExceeded: return "SearchCapExceeded";
        case Errc::SignatureMismatch: return "SignatureMismatch";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::ArityMismatch: return "ArityMismatch";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::PreconditionArity: return "PreconditionArity";
        case Errc::NoSuchIndex: return "NoSuchIndex";
        case Errc::ImproperBase: return "ImproperBase";
        case Errc::NotHomomorphism: return "NotHomomorphism";
        case Errc::NotFullyAbsorbing: return "NotFullyAbsorbing";
        case Errc::HasCubeTerm: return "HasCubeTerm";
        case Errc::DegenerateSignature: return "DegenerateSignature";
        case Errc::LeadingArityTooSmall: return "LeadingArityTooSmall";
        case Errc::CapExceeded: return "CapExceeded";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ParseError: return "ParseError";
        case Errc::Inconsistent: return "Inconsistent";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<OperationSymbol> symbols) : symbols_(std::move(symbols)) {
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.name.empty())
            raise(Errc::BadSignature, "operation symbol with empty name");
        if (s.arity < 2)
            raise(Errc::BadSignature, "symbol '" + s.name + "' has arity " +
                                          std::to_string(s.arity) + " (every arity must be >= 2)");
        if (!seen.insert(s.name).second)
            raise(Errc::BadSignature, "duplicate symbol name '" + s.name + "'");
    }
}

std::optional<size_t> Signature::index_of(const std::string& name) const {
    for (size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

SignatureStats signature_stats(const Signature& sig) {
    SignatureStats st;
    st.cube_bound = 1;
    for (const auto& s : sig.symbols()) {
        st.max_arity = std::max(st.max_arity, s.arity);
        st.cube_bound += s.arity - 1;
    }
    return st;
}

// ---------------------------------------------------------------------------
// Subset

Subset::Subset(int universe_size) : universe_(universe_size) {
    if (universe_size < 0) raise(Errc::InvalidArgument, "negative universe size");
    bits_.assign((static_cast<size_t>(universe_size) + 63) / 64, 0);
}

Subset::Subset(int universe_size, std::initializer_list<int> elements) : Subset(universe_size) {
    for (int e : elements) add(e);
}

Subset Subset::full(int universe_size) {
    Subset s(universe_size);
    for (int e = 0; e < universe_size; ++e) s.add(e);
    return s;
}

Subset Subset::of(int universe_size, const std::vector<int>& elements) {
    Subset s(universe_size);
    for (int e : elements) s.add(e);
    return s;
}

Subset Subset::single(int universe_size, int element) {
    Subset s(universe_size);
    s.add(element);
    return s;
}

void Subset::check_element(int e) const {
    if (e < 0 || e >= universe_)
        raise(Errc::EntryOutOfRange,
              "element " + std::to_string(e) + " outside universe of size " + std::to_string(universe_));
}

int Subset::size() const {
    int n = 0;
    for (uint64_t w : bits_) n += std::popcount(w);
    return n;
}

bool Subset::contains(int e) const {
    check_element(e);
    return (bits_[static_cast<size_t>(e) / 64] >> (e % 64)) & 1u;
}

void Subset::add(int e) {
    check_element(e);
    bits_[static_cast<size_t>(e) / 64] |= uint64_t{1} << (e % 64);
}

void Subset::remove(int e) {
    check_element(e);
    bits_[static_cast<size_t>(e) / 64] &= ~(uint64_t{1} << (e % 64));
}

bool Subset::is_subset_of(const Subset& other) const {
    if (universe_ != other.universe_) raise(Errc::InvalidArgument, "subset universe mismatch");
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~other.bits_[i]) return false;
    return true;
}

Subset Subset::intersect(const Subset& other) const {
    if (universe_ != other.universe_) raise(Errc::InvalidArgument, "subset universe mismatch");
    Subset r(universe_);
    for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] & other.bits_[i];
    return r;
}

Subset Subset::unite(const Subset& other) const {
    if (universe_ != other.universe_) raise(Errc::InvalidArgument, "subset universe mismatch");
    Subset r(universe_);
    for (size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] | other.bits_[i];
    return r;
}

Subset Subset::complement() const {
    Subset r(universe_);
    for (int e = 0; e < universe_; ++e)
        if (!contains(e)) r.add(e);
    return r;
}

std::vector<int> Subset::elements() const {
    std::vector<int> out;
    for (int e = 0; e < universe_; ++e)
        if (contains(e)) out.push_back(e);
    return out;
}

bool subset_less(const Subset& a, const Subset& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (size_t i = std::max(wa.size(), wb.size()); i-- > 0;) {
        uint64_t x = i < wa.size() ? wa[i] : 0;
        uint64_t y = i < wb.size() ? wb[i] : 0;
        if (x != y) return x < y;
    }
    return false;
}

// ---------------------------------------------------------------------------
// FiniteAlgebra

namespace {

size_t checked_table_size(int k, int arity) {
    size_t n = 1;
    for (int i = 0; i < arity; ++i) {
        if (n > (size_t{1} << 40) / static_cast<size_t>(std::max(k, 1)))
            raise(Errc::InvalidArgument, "operation table would be astronomically large");
        n *= static_cast<size_t>(k);
    }
    return n;
}

} // namespace

void validate(int size, const Signature& sig, const std::vector<std::vector<int>>& tables) {
    if (size <= 0) raise(Errc::InvalidArgument, "universe size must be positive");
    if (tables.size() != sig.size())
        raise(Errc::InvalidArgument, "expected " + std::to_string(sig.size()) + " tables, got " +
                                         std::to_string(tables.size()));
    for (size_t op = 0; op < sig.size(); ++op) {
        const auto& sym = sig[op];
        size_t expect = checked_table_size(size, sym.arity);
        if (tables[op].size() != expect)
            raise(Errc::TableOutOfRange, "table for '" + sym.name + "' has " +
                                             std::to_string(tables[op].size()) + " entries, expected " +
                                             std::to_string(expect));
        for (size_t idx = 0; idx < tables[op].size(); ++idx) {
            int v = tables[op][idx];
            if (v < 0 || v >= size)
                raise(Errc::TableOutOfRange,
                      "table for '" + sym.name + "' has out-of-range value " + std::to_string(v) +
                          " at index " + std::to_string(idx));
        }
        // diagonal check: f(a,...,a) = a
        for (int a = 0; a < size; ++a) {
            size_t idx = 0;
            for (int i = 0; i < sym.arity; ++i) idx = idx * static_cast<size_t>(size) + static_cast<size_t>(a);
            if (tables[op][idx] != a) {
                std::ostringstream os;
                os << "'" << sym.name << "' is not idempotent: f(" << a;
                for (int i = 1; i < sym.arity; ++i) os << "," << a;
                os << ") = " << tables[op][idx];
                raise(Errc::NotIdempotent, os.str());
            }
        }
    }
}

FiniteAlgebra::FiniteAlgebra(int size, Signature sig, std::vector<std::vector<int>> tables)
    : size_(size), sig_(std::move(sig)), tables_(std::move(tables)) {
    validate(size_, sig_, tables_);
}

void validate(const FiniteAlgebra& algebra) {
    std::vector<std::vector<int>> tables;
    tables.reserve(algebra.op_count());
    for (size_t op = 0; op < algebra.op_count(); ++op) tables.push_back(algebra.table(op));
    validate(algebra.size(), algebra.signature(), tables);
}

size_t FiniteAlgebra::table_index(std::span<const int> args) const {
    size_t idx = 0;
    for (int a : args) idx = idx * static_cast<size_t>(size_) + static_cast<size_t>(a);
    return idx;
}

int FiniteAlgebra::apply(size_t op, std::span<const int> args) const {
    if (static_cast<int>(args.size()) != sig_[op].arity)
        raise(Errc::ArityMismatch, "'" + sig_[op].name + "' expects " + std::to_string(sig_[op].arity) +
                                       " arguments, got " + std::to_string(args.size()));
    for (int a : args)
        if (a < 0 || a >= size_) raise(Errc::EntryOutOfRange, "argument outside universe");
    return tables_[op][table_index(args)];
}

// ---------------------------------------------------------------------------
// Homomorphism

Homomorphism::Homomorphism(FiniteAlgebra source, FiniteAlgebra target, std::vector<int> map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
    if (source_.signature() != target_.signature())
        raise(Errc::SignatureMismatch, "homomorphism endpoints have different signatures");
    if (map_.size() != static_cast<size_t>(source_.size()))
        raise(Errc::InvalidArgument, "homomorphism map has wrong length");
    for (int v : map_)
        if (v < 0 || v >= target_.size()) raise(Errc::EntryOutOfRange, "homomorphism value outside target");
    // Exhaustively check commuting with every operation table.
    for (size_t op = 0; op < source_.op_count(); ++op) {
        int n = source_.arity(op);
        std::vector<int> args(static_cast<size_t>(n), 0), mapped(static_cast<size_t>(n), 0);
        while (true) {
            for (int i = 0; i < n; ++i) mapped[static_cast<size_t>(i)] = map_[static_cast<size_t>(args[static_cast<size_t>(i)])];
            int lhs = map_[static_cast<size_t>(source_.apply(op, args))];
            int rhs = target_.apply(op, mapped);
            if (lhs != rhs) {
                std::ostringstream os;
                os << "map does not commute with '" << source_.signature()[op].name << "' at (";
                for (int i = 0; i < n; ++i) os << (i ? "," : "") << args[static_cast<size_t>(i)];
                os << ")";
                raise(Errc::NotHomomorphism, os.str());
            }
            int pos = n - 1;
            while (pos >= 0 && ++args[static_cast<size_t>(pos)] == source_.size()) {
                args[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
}

bool Homomorphism::is_surjective() const {
    std::vector<bool> hit(static_cast<size_t>(target_.size()), false);
    for (int v : map_) hit[static_cast<size_t>(v)] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

Subset Homomorphism::preimage(const Subset& of_target) const {
    Subset r(source_.size());
    for (int e = 0; e < source_.size(); ++e)
        if (of_target.contains(map_[static_cast<size_t>(e)])) r.add(e);
    return r;
}

Subset Homomorphism::image(const Subset& of_source) const {
    Subset r(target_.size());
    for (int e = 0; e < source_.size(); ++e)
        if (of_source.contains(e)) r.add(map_[static_cast<size_t>(e)]);
    return r;
}

// ---------------------------------------------------------------------------
// Subuniverse generation and enumeration

Subset generate_subuniverse(const FiniteAlgebra& algebra, const Subset& seed) {
    if (seed.universe_size() != algebra.size())
        raise(Errc::InvalidArgument, "seed universe does not match algebra");
    if (seed.empty()) raise(Errc::InvalidArgument, "seed must be nonempty");
    Subset closed = seed;
    std::vector<int> members = closed.elements();
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t op = 0; op < algebra.op_count(); ++op) {
            int n = algebra.arity(op);
            std::vector<size_t> pick(static_cast<size_t>(n), 0);
            std::vector<int> args(static_cast<size_t>(n), 0);
            while (true) {
                for (int i = 0; i < n; ++i) args[static_cast<size_t>(i)] = members[pick[static_cast<size_t>(i)]];
                int v = algebra.apply(op, args);
                if (!closed.contains(v)) {
                    closed.add(v);
                    members.push_back(v);
                    grew = true;
                }
                int pos = n - 1;
                while (pos >= 0 && ++pick[static_cast<size_t>(pos)] == members.size()) {
                    pick[static_cast<size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 0) break;
            }
        }
    }
    return closed;
}

bool is_subuniverse(const FiniteAlgebra& algebra, const Subset& s) {
    std::vector<int> members = s.elements();
    if (members.empty()) return false;
    for (size_t op = 0; op < algebra.op_count(); ++op) {
        int n = algebra.arity(op);
        std::vector<size_t> pick(static_cast<size_t>(n), 0);
        std::vector<int> args(static_cast<size_t>(n), 0);
        while (true) {
            for (int i = 0; i < n; ++i) args[static_cast<size_t>(i)] = members[pick[static_cast<size_t>(i)]];
            if (!s.contains(algebra.apply(op, args))) return false;
            int pos = n - 1;
            while (pos >= 0 && ++pick[static_cast<size_t>(pos)] == members.size()) {
                pick[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
    return true;
}

std::vector<Subset> all_subuniverses(const FiniteAlgebra& algebra, int cap) {
    if (algebra.size() > cap)
        raise(Errc::SearchCapExceeded, "universe size " + std::to_string(algebra.size()) +
                                           " exceeds subuniverse enumeration cap " + std::to_string(cap));
    int k = algebra.size();
    if (k > 62) raise(Errc::SearchCapExceeded, "exhaustive enumeration limited to universes of size <= 62");
    std::vector<Subset> out;
    for (uint64_t mask = 1; mask < (uint64_t{1} << k); ++mask) {
        Subset s(k);
        for (int e = 0; e < k; ++e)
            if ((mask >> e) & 1u) s.add(e);
        if (is_subuniverse(algebra, s)) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), subset_less);
    return out;
}

// ---------------------------------------------------------------------------
// Products and induced subalgebras

ProductAlgebra product(const FiniteAlgebra& a, const FiniteAlgebra& b) {
    if (a.signature() != b.signature()) raise(Errc::SignatureMismatch, "product factors differ in signature");
    int ka = a.size(), kb = b.size();
    int k = ka * kb;
    std::vector<std::vector<int>> tables(a.op_count());
    for (size_t op = 0; op < a.op_count(); ++op) {
        int n = a.arity(op);
        tables[op].resize(checked_table_size(k, n));
        std::vector<int> args(static_cast<size_t>(n), 0), left(static_cast<size_t>(n), 0), right(static_cast<size_t>(n), 0);
        size_t idx = 0;
        while (true) {
            for (int i = 0; i < n; ++i) {
                left[static_cast<size_t>(i)] = args[static_cast<size_t>(i)] / kb;
                right[static_cast<size_t>(i)] = args[static_cast<size_t>(i)] % kb;
            }
            tables[op][idx] = a.apply(op, left) * kb + b.apply(op, right);
            ++idx;
            int pos = n - 1;
            while (pos >= 0 && ++args[static_cast<size_t>(pos)] == k) {
                args[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
    FiniteAlgebra prod(k, a.signature(), std::move(tables));
    std::vector<int> pa(static_cast<size_t>(k)), pb(static_cast<size_t>(k));
    for (int e = 0; e < k; ++e) {
        pa[static_cast<size_t>(e)] = e / kb;
        pb[static_cast<size_t>(e)] = e % kb;
    }
    Homomorphism first(prod, a, std::move(pa));
    Homomorphism second(prod, b, std::move(pb));
    return ProductAlgebra{std::move(prod), std::move(first), std::move(second)};
}

Subset InducedSubalgebra::restrict(const Subset& of_parent) const {
    Subset r(static_cast<int>(elements.size()));
    for (size_t i = 0; i < elements.size(); ++i)
        if (of_parent.contains(elements[i])) r.add(static_cast<int>(i));
    return r;
}

InducedSubalgebra induced_subalgebra(const FiniteAlgebra& algebra, const Subset& b) {
    if (!is_subuniverse(algebra, b))
        raise(Errc::InvalidArgument, "cannot restrict to a set that is not a subuniverse");
    InducedSubalgebra out;
    out.elements = b.elements();
    out.index_of.assign(static_cast<size_t>(algebra.size()), -1);
    for (size_t i = 0; i < out.elements.size(); ++i)
        out.index_of[static_cast<size_t>(out.elements[i])] = static_cast<int>(i);
    int k = static_cast<int>(out.elements.size());
    std::vector<std::vector<int>> tables(algebra.op_count());
    for (size_t op = 0; op < algebra.op_count(); ++op) {
        int n = algebra.arity(op);
        tables[op].resize(checked_table_size(k, n));
        std::vector<int> pick(static_cast<size_t>(n), 0), args(static_cast<size_t>(n), 0);
        size_t idx = 0;
        while (true) {
            for (int i = 0; i < n; ++i) args[static_cast<size_t>(i)] = out.elements[static_cast<size_t>(pick[static_cast<size_t>(i)])];
            tables[op][idx] = out.index_of[static_cast<size_t>(algebra.apply(op, args))];
            ++idx;
            int pos = n - 1;
            while (pos >= 0 && ++pick[static_cast<size_t>(pos)] == k) {
                pick[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
    out.algebra = FiniteAlgebra(k, algebra.signature(), std::move(tables));
    return out;
}

} // namespace cubeterm
