#include "cubeterm/subpower.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <thread>

namespace cubeterm {

namespace {

uint64_t fnv1a(const uint16_t* p, size_t n) {
    const uint8_t* b = reinterpret_cast<const uint8_t*>(p);
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < 2 * n; ++i) {
        h ^= b[i];
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t pack_word(const uint16_t* p, size_t n, int bits) {
    uint64_t w = 0;
    for (size_t i = 0; i < n; ++i) w |= uint64_t(p[i]) << (bits * static_cast<int>(i));
    return w;
}

} // namespace

// ---------------------------------------------------------------------------
// PowerTuple

PowerTuple PowerTuple::from(const std::vector<int>& v) {
    std::vector<uint16_t> e(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0 || v[i] > 65535) raise(Errc::EntryOutOfRange, "tuple entry outside 16-bit range");
        e[i] = static_cast<uint16_t>(v[i]);
    }
    return PowerTuple(std::move(e));
}

// ---------------------------------------------------------------------------
// TermWitness

TermWitness::TermWitness(std::vector<TermNode> nodes, uint32_t root) : nodes_(std::move(nodes)), root_(root) {
    if (root_ >= nodes_.size()) raise(Errc::InvalidArgument, "witness root out of range");
    for (size_t i = 0; i < nodes_.size(); ++i)
        for (uint32_t c : nodes_[i].children)
            if (c >= i) raise(Errc::InvalidArgument, "witness nodes must be topologically ordered");
}

size_t TermWitness::depth() const {
    std::vector<size_t> d(nodes_.size(), 0);
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].op < 0) continue;
        size_t m = 0;
        for (uint32_t c : nodes_[i].children) m = std::max(m, d[c]);
        d[i] = m + 1;
    }
    return nodes_.empty() ? 0 : d[root_];
}

std::vector<uint32_t> TermWitness::distinct_leaves() const {
    std::vector<uint32_t> out;
    for (const auto& n : nodes_)
        if (n.op < 0) out.push_back(n.leaf);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int TermWitness::evaluate_by_leaf(const FiniteAlgebra& algebra, std::span<const int> values_by_leaf) const {
    std::vector<int> val(nodes_.size(), 0);
    std::vector<int> args;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.op < 0) {
            if (n.leaf >= values_by_leaf.size()) raise(Errc::ArityMismatch, "missing value for witness leaf");
            val[i] = values_by_leaf[n.leaf];
        } else {
            args.clear();
            for (uint32_t c : n.children) args.push_back(val[c]);
            val[i] = algebra.apply(static_cast<size_t>(n.op), args);
        }
    }
    return val[root_];
}

PowerTuple TermWitness::evaluate_tuples(const FiniteAlgebra& algebra,
                                        std::span<const PowerTuple> tuples_by_leaf) const {
    if (tuples_by_leaf.empty()) raise(Errc::ArityMismatch, "no leaf tuples supplied");
    size_t len = tuples_by_leaf[0].length();
    std::vector<std::vector<uint16_t>> val(nodes_.size());
    std::vector<int> args;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.op < 0) {
            if (n.leaf >= tuples_by_leaf.size()) raise(Errc::ArityMismatch, "missing tuple for witness leaf");
            if (tuples_by_leaf[n.leaf].length() != len) raise(Errc::LengthMismatch, "leaf tuples differ in length");
            val[i] = tuples_by_leaf[n.leaf].entries();
        } else {
            val[i].resize(len);
            for (size_t c = 0; c < len; ++c) {
                args.clear();
                for (uint32_t ch : n.children) args.push_back(val[ch][c]);
                val[i][c] = static_cast<uint16_t>(algebra.apply(static_cast<size_t>(n.op), args));
            }
        }
    }
    return PowerTuple(val[root_]);
}

std::string TermWitness::to_string(const FiniteAlgebra& algebra, const std::vector<std::string>& leaf_names) const {
    std::vector<std::string> s(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.op < 0) {
            s[i] = n.leaf < leaf_names.size() ? leaf_names[n.leaf] : "g" + std::to_string(n.leaf);
        } else {
            std::string t = algebra.signature()[static_cast<size_t>(n.op)].name;
            t += '(';
            for (size_t c = 0; c < n.children.size(); ++c) {
                if (c) t += ',';
                t += s[n.children[c]];
            }
            t += ')';
            s[i] = std::move(t);
        }
    }
    return nodes_.empty() ? std::string() : s[root_];
}

int evaluate_witness(const TermWitness& witness, const FiniteAlgebra& algebra, std::span<const int> args) {
    auto leaves = witness.distinct_leaves();
    if (args.size() != leaves.size())
        raise(Errc::ArityMismatch, "witness has " + std::to_string(leaves.size()) +
                                       " distinct leaves, got " + std::to_string(args.size()) + " arguments");
    uint32_t max_leaf = leaves.empty() ? 0 : leaves.back();
    std::vector<int> by_leaf(static_cast<size_t>(max_leaf) + 1, 0);
    for (size_t i = 0; i < leaves.size(); ++i) by_leaf[leaves[i]] = args[i];
    return witness.evaluate_by_leaf(algebra, by_leaf);
}

// ---------------------------------------------------------------------------
// ClosureResult

uint64_t ClosureResult::key_of(const uint16_t* t) const {
    return key_bits_ ? pack_word(t, len_, key_bits_) : fnv1a(t, len_);
}

std::optional<uint32_t> ClosureResult::lookup(const uint16_t* t) const {
    uint64_t key = key_of(t);
    auto it = first_.find(key);
    if (it == first_.end()) return std::nullopt;
    if (std::memcmp(data_.data() + size_t(it->second) * len_, t, len_ * 2) == 0) return it->second;
    auto jt = more_.find(key);
    if (jt != more_.end())
        for (uint32_t id : jt->second)
            if (std::memcmp(data_.data() + size_t(id) * len_, t, len_ * 2) == 0) return id;
    return std::nullopt;
}

PowerTuple ClosureResult::element(size_t id) const {
    auto b = element_entries(id);
    return PowerTuple(std::vector<uint16_t>(b.begin(), b.end()));
}

std::span<const uint16_t> ClosureResult::element_entries(size_t id) const {
    if (id >= size()) raise(Errc::NoSuchIndex, "closure element " + std::to_string(id) + " out of range");
    return {data_.data() + id * len_, len_};
}

std::optional<size_t> ClosureResult::index_of(const PowerTuple& t) const {
    if (t.length() != len_) return std::nullopt;
    auto r = lookup(t.entries().data());
    if (!r) return std::nullopt;
    return static_cast<size_t>(*r);
}

TermWitness ClosureResult::witness(size_t id) const {
    if (id >= size()) raise(Errc::NoSuchIndex, "closure element out of range");
    // Iterative post-order over the provenance DAG; shared subterms become
    // shared nodes (hash-consing by element identity).
    std::vector<int64_t> node_of(size(), -1);
    std::vector<TermNode> nodes;
    std::vector<std::pair<uint32_t, size_t>> stack;  // (element, next child position)
    stack.emplace_back(static_cast<uint32_t>(id), 0);
    while (!stack.empty()) {
        auto& [e, next] = stack.back();
        if (node_of[e] >= 0) {
            stack.pop_back();
            continue;
        }
        if (prov_op_[e] < 0) {
            node_of[e] = static_cast<int64_t>(nodes.size());
            nodes.push_back(TermNode{-1, prov_begin_[e], {}});
            stack.pop_back();
            continue;
        }
        size_t n = prov_nargs_[e];
        if (next < n) {
            uint32_t child = args_pool_[prov_begin_[e] + next];
            ++next;
            if (node_of[child] < 0) stack.emplace_back(child, 0);
            continue;
        }
        TermNode tn;
        tn.op = prov_op_[e];
        tn.children.reserve(n);
        for (size_t i = 0; i < n; ++i)
            tn.children.push_back(static_cast<uint32_t>(node_of[args_pool_[prov_begin_[e] + i]]));
        node_of[e] = static_cast<int64_t>(nodes.size());
        nodes.push_back(std::move(tn));
        stack.pop_back();
    }
    return TermWitness(std::move(nodes), static_cast<uint32_t>(node_of[id]));
}

// ---------------------------------------------------------------------------
// Closure builder

class ClosureBuilder {
public:
    ClosureBuilder(int universe, size_t len) {
        r_.universe_ = universe;
        r_.len_ = len;
        int bits = 1;
        while ((1 << bits) < universe) ++bits;
        r_.key_bits_ = bits * len <= 64 ? bits : 0;
    }

    uint32_t size() const { return static_cast<uint32_t>(r_.prov_op_.size()); }
    const uint16_t* bytes(uint32_t id) const { return r_.data_.data() + size_t(id) * r_.len_; }

    std::pair<uint32_t, bool> insert_leaf(const uint16_t* t, uint32_t generator_index) {
        return insert(t, -1, generator_index, {});
    }

    std::pair<uint32_t, bool> insert_apply(const uint16_t* t, int32_t op, std::span<const uint32_t> args) {
        return insert(t, op, 0, args);
    }

    ClosureResult take(std::vector<uint32_t> generator_ids) {
        r_.generator_ids_ = std::move(generator_ids);
        return std::move(r_);
    }

private:
    std::pair<uint32_t, bool> insert(const uint16_t* t, int32_t op, uint32_t leaf, std::span<const uint32_t> args) {
        uint64_t key = r_.key_of(t);
        auto [it, fresh] = r_.first_.try_emplace(key, size());
        if (!fresh) {
            if (std::memcmp(bytes(it->second), t, r_.len_ * 2) == 0) return {it->second, false};
            auto& chain = r_.more_[key];
            for (uint32_t id : chain)
                if (std::memcmp(bytes(id), t, r_.len_ * 2) == 0) return {id, false};
            chain.push_back(size());
        }
        uint32_t id = size();
        r_.data_.insert(r_.data_.end(), t, t + r_.len_);
        r_.prov_op_.push_back(op);
        if (op < 0) {
            r_.prov_begin_.push_back(leaf);
            r_.prov_nargs_.push_back(0);
        } else {
            r_.prov_begin_.push_back(static_cast<uint32_t>(r_.args_pool_.size()));
            r_.prov_nargs_.push_back(static_cast<uint8_t>(args.size()));
            r_.args_pool_.insert(r_.args_pool_.end(), args.begin(), args.end());
        }
        return {id, true};
    }

    ClosureResult r_;
};

// ---------------------------------------------------------------------------
// close()

namespace {

/// Mixed-radix cursor over argument-id ranges, one [lo, hi) range per
/// operation argument. Enumeration is lexicographic with position 0 most
/// significant; this fixed order is what makes the closure deterministic.
struct ComboSpace {
    std::vector<uint32_t> lo, hi;

    bool empty() const {
        if (lo.empty()) return true;
        for (size_t i = 0; i < lo.size(); ++i)
            if (lo[i] >= hi[i]) return true;
        return false;
    }
};

struct ComboCursor {
    std::vector<uint32_t> digits;
    bool exhausted = false;

    explicit ComboCursor(const ComboSpace& s) : digits(s.lo) { exhausted = s.empty(); }

    void advance(const ComboSpace& s) {
        size_t i = digits.size();
        while (i-- > 0) {
            if (++digits[i] < s.hi[i]) return;
            digits[i] = s.lo[i];
        }
        exhausted = true;
    }
};

struct StopInfo {
    bool stopped = false;
    CloseStatus status = CloseStatus::Closed;
    uint32_t target_id = 0;
};

struct Expander {
    ClosureBuilder& builder;
    const FiniteAlgebra& algebra;
    uint64_t cap;
    uint64_t work_cap;
    uint64_t work = 0;
    const uint16_t* target;  // null if absent
    int threads;
    size_t len;

    // scratch
    std::vector<const uint16_t*> ptrs;
    std::vector<uint16_t> out;

    Expander(ClosureBuilder& b, const FiniteAlgebra& a, uint64_t cap_, uint64_t work_cap_, const uint16_t* t,
             int th, size_t len_)
        : builder(b), algebra(a), cap(cap_), work_cap(work_cap_), target(t), threads(std::max(1, th)), len(len_) {}

    bool commit(size_t op, const uint16_t* t, const uint32_t* args, size_t n, StopInfo& stop) {
        if (work_cap && ++work > work_cap) {
            stop = {true, CloseStatus::CapExceeded, 0};
            return false;
        }
        auto [id, fresh] = builder.insert_apply(t, static_cast<int32_t>(op), {args, n});
        if (!fresh) return true;
        if (builder.size() > cap) {
            stop = {true, CloseStatus::CapExceeded, 0};
            return false;
        }
        if (target && std::memcmp(t, target, len * 2) == 0) {
            stop = {true, CloseStatus::FoundTarget, id};
            return false;
        }
        return true;
    }

    void run_block(size_t op, const ComboSpace& space, StopInfo& stop) {
        if (space.empty()) return;
        const int n = algebra.arity(op);
        const int k = algebra.size();
        const int* tbl = algebra.table(op).data();
        ptrs.resize(static_cast<size_t>(n));
        out.resize(len);

        auto eval_into = [&](const uint32_t* args, uint16_t* dst, std::vector<const uint16_t*>& p) {
            for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = builder.bytes(args[i]);
            for (size_t c = 0; c < len; ++c) {
                size_t idx = 0;
                for (int i = 0; i < n; ++i) idx = idx * static_cast<size_t>(k) + p[static_cast<size_t>(i)][c];
                dst[c] = static_cast<uint16_t>(tbl[idx]);
            }
        };

        // Thread spawn costs dwarf small blocks; run those inline. The
        // enumeration order is the same either way, so results are identical.
        uint64_t block_size = 1;
        for (int i = 0; i < n && block_size < (uint64_t{1} << 40); ++i)
            block_size *= space.hi[static_cast<size_t>(i)] - space.lo[static_cast<size_t>(i)];
        if (threads <= 1 || block_size < 65536) {
            ComboCursor cur(space);
            while (!cur.exhausted) {
                eval_into(cur.digits.data(), out.data(), ptrs);
                if (!commit(op, out.data(), cur.digits.data(), static_cast<size_t>(n), stop)) return;
                cur.advance(space);
            }
            return;
        }

        // Parallel: workers evaluate disjoint chunks of the cursor sequence
        // into private buffers; the main thread then commits them in cursor
        // order. Workers only read elements that existed at layer start, and
        // the builder is mutated only between batches.
        constexpr size_t kChunk = 16384;
        struct Chunk {
            ComboCursor start;
            size_t count = 0;
            std::vector<uint16_t> tuples;
            std::vector<uint32_t> args;
        };
        ComboCursor cur(space);
        while (!cur.exhausted) {
            std::vector<Chunk> batch;
            for (int t = 0; t < threads && !cur.exhausted; ++t) {
                Chunk c{cur, 0, {}, {}};
                size_t cnt = 0;
                while (cnt < kChunk && !cur.exhausted) {
                    ++cnt;
                    cur.advance(space);
                }
                c.count = cnt;
                batch.push_back(std::move(c));
            }
            std::vector<std::thread> pool;
            for (auto& c : batch) {
                pool.emplace_back([&, n]() {
                    c.tuples.resize(c.count * len);
                    c.args.resize(c.count * static_cast<size_t>(n));
                    std::vector<const uint16_t*> p(static_cast<size_t>(n));
                    ComboCursor w = c.start;
                    for (size_t s = 0; s < c.count; ++s) {
                        std::copy(w.digits.begin(), w.digits.end(),
                                  c.args.begin() + static_cast<long>(s * static_cast<size_t>(n)));
                        eval_into(w.digits.data(), c.tuples.data() + s * len, p);
                        w.advance(space);
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& c : batch) {
                for (size_t s = 0; s < c.count; ++s) {
                    if (!commit(op, c.tuples.data() + s * len, c.args.data() + s * static_cast<size_t>(n),
                                static_cast<size_t>(n), stop))
                        return;
                }
            }
        }
    }
};

} // namespace

CloseOutcome close(const FiniteAlgebra& algebra, const std::vector<PowerTuple>& generators,
                   const std::optional<PowerTuple>& target, const CloseOptions& options) {
    if (generators.empty()) raise(Errc::InvalidArgument, "at least one generator required");
    if (options.cap == 0) raise(Errc::InvalidArgument, "closure cap must be positive");
    const size_t len = generators[0].length();
    if (len == 0) raise(Errc::LengthMismatch, "generators must have positive length");
    if (algebra.size() > 65536) raise(Errc::InvalidArgument, "closure engine supports universes up to 65536");
    for (const auto& g : generators) {
        if (g.length() != len) raise(Errc::LengthMismatch, "generators differ in length");
        for (uint16_t e : g.entries())
            if (e >= algebra.size()) raise(Errc::EntryOutOfRange, "generator entry outside universe");
    }
    if (target && target->length() != len) raise(Errc::LengthMismatch, "target length differs from generators");

    ClosureBuilder builder(algebra.size(), len);
    std::vector<uint32_t> gen_ids;
    gen_ids.reserve(generators.size());

    CloseOutcome outcome;
    const uint16_t* target_bytes = target ? target->entries().data() : nullptr;

    for (size_t i = 0; i < generators.size(); ++i) {
        auto [id, fresh] = builder.insert_leaf(generators[i].entries().data(), static_cast<uint32_t>(i));
        gen_ids.push_back(id);
        if (fresh && builder.size() > options.cap) {
            outcome.status = CloseStatus::CapExceeded;
            outcome.closure = builder.take(std::move(gen_ids));
            return outcome;
        }
        if (target_bytes && std::memcmp(builder.bytes(id), target_bytes, len * 2) == 0) {
            outcome.status = CloseStatus::FoundTarget;
            outcome.closure = builder.take(std::move(gen_ids));
            outcome.target_witness = outcome.closure.witness(id);
            return outcome;
        }
    }

    Expander ex(builder, algebra, options.cap, options.work_cap, target_bytes, options.threads, len);

    uint32_t layer_begin = 0;
    uint32_t layer_end = builder.size();
    StopInfo stop;
    while (layer_begin < layer_end && !stop.stopped) {
        for (size_t op = 0; op < algebra.op_count() && !stop.stopped; ++op) {
            const size_t n = static_cast<size_t>(algebra.arity(op));
            // Partition "combos touching the newest layer" by the first
            // argument position drawn from it: earlier positions use old
            // elements only, later positions anything seen so far.
            for (size_t j = 0; j < n && !stop.stopped; ++j) {
                ComboSpace space;
                space.lo.assign(n, 0);
                space.hi.assign(n, 0);
                for (size_t p = 0; p < n; ++p) {
                    if (p < j) {
                        space.lo[p] = 0;
                        space.hi[p] = layer_begin;
                    } else if (p == j) {
                        space.lo[p] = layer_begin;
                        space.hi[p] = layer_end;
                    } else {
                        space.lo[p] = 0;
                        space.hi[p] = layer_end;
                    }
                }
                ex.run_block(op, space, stop);
            }
        }
        layer_begin = layer_end;
        layer_end = builder.size();
    }

    if (stop.stopped) {
        outcome.status = stop.status;
        outcome.closure = builder.take(std::move(gen_ids));
        if (stop.status == CloseStatus::FoundTarget)
            outcome.target_witness = outcome.closure.witness(stop.target_id);
    } else {
        outcome.status = CloseStatus::Closed;
        outcome.closure = builder.take(std::move(gen_ids));
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// Free algebra on two generators

ClosureResult free_algebra_on_two(const FiniteAlgebra& algebra, const CloseOptions& options) {
    const int k = algebra.size();
    const size_t len = static_cast<size_t>(k) * static_cast<size_t>(k);
    std::vector<uint16_t> x(len), y(len);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            x[static_cast<size_t>(a) * k + b] = static_cast<uint16_t>(a);
            y[static_cast<size_t>(a) * k + b] = static_cast<uint16_t>(b);
        }
    auto outcome = close(algebra, {PowerTuple(std::move(x)), PowerTuple(std::move(y))}, std::nullopt, options);
    if (outcome.status == CloseStatus::CapExceeded)
        raise(Errc::CapExceeded, "free algebra closure exceeded cap " + std::to_string(options.cap));
    return std::move(outcome.closure);
}

// ---------------------------------------------------------------------------
// Materialization

MaterializedSubpower materialize_subpower(const FiniteAlgebra& base, ClosureResult closure, uint64_t element_cap) {
    const size_t m = closure.size();
    if (m == 0) raise(Errc::InvalidArgument, "cannot materialize an empty closure");
    if (m > element_cap)
        raise(Errc::CapExceeded, "closure has " + std::to_string(m) + " elements, materialization cap is " +
                                     std::to_string(element_cap));
    const auto& sig = base.signature();
    for (const auto& sym : sig.symbols()) {
        double entries = 1;
        for (int i = 0; i < sym.arity; ++i) entries *= static_cast<double>(m);
        if (entries > double(1 << 24))
            raise(Errc::CapExceeded, "materialized table for '" + sym.name + "' would be too large");
    }
    const size_t len = closure.tuple_length();
    std::vector<std::vector<int>> tables(sig.size());
    std::vector<uint16_t> out(len);
    for (size_t op = 0; op < sig.size(); ++op) {
        const size_t n = static_cast<size_t>(sig[op].arity);
        size_t total = 1;
        for (size_t i = 0; i < n; ++i) total *= m;
        tables[op].resize(total);
        std::vector<size_t> args(n, 0);
        std::vector<std::span<const uint16_t>> ptrs(n);
        std::vector<int> a(n, 0);
        for (size_t idx = 0; idx < total; ++idx) {
            for (size_t i = 0; i < n; ++i) ptrs[i] = closure.element_entries(args[i]);
            for (size_t c = 0; c < len; ++c) {
                for (size_t i = 0; i < n; ++i) a[i] = ptrs[i][c];
                out[c] = static_cast<uint16_t>(base.apply(op, a));
            }
            auto found = closure.index_of(PowerTuple(std::vector<uint16_t>(out.begin(), out.end())));
            if (!found)
                raise(Errc::Inconsistent, "closure is not closed under '" + sig[op].name + "' (engine bug)");
            tables[op][idx] = static_cast<int>(*found);
            size_t pos = n;
            while (pos-- > 0) {
                if (++args[pos] < m) break;
                args[pos] = 0;
                if (pos == 0) break;
            }
        }
    }
    MaterializedSubpower ms{FiniteAlgebra(static_cast<int>(m), sig, std::move(tables)), std::move(closure), {}};
    for (size_t i = 0; i < ms.closure.generator_count(); ++i)
        ms.generator_ids.push_back(ms.closure.generator_id(i));
    return ms;
}

} // namespace cubeterm
