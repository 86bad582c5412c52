#include "dirac/symbols.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "dirac/error.hpp"

namespace dirac {

namespace {

struct Registry {
    std::deque<SymInfo> infos;          // stable references
    std::deque<std::uint64_t> keys;
    std::map<std::string, int> by_name;
    std::shared_mutex mu;
};

Registry& reg() {
    static Registry r;
    return r;
}

std::uint64_t make_key(const SymInfo& s, int id) {
    auto rank = static_cast<std::uint64_t>(s.kind);
    std::uint64_t idx = static_cast<std::uint64_t>(s.index) & 0xFFFFF;
    std::uint64_t til = static_cast<std::uint64_t>(s.tilde) & 0xFFF;
    return (rank << 56) | (idx << 36) | (til << 24) | (static_cast<std::uint64_t>(id) & 0xFFFFFF);
}

int insert_locked(Registry& r, SymInfo info) {
    int id = static_cast<int>(r.infos.size());
    r.by_name.emplace(info.name, id);
    r.keys.push_back(0);
    r.infos.push_back(std::move(info));
    r.keys.back() = make_key(r.infos.back(), id);
    return id;
}

} // namespace

int sym(const std::string& name, SymKind kind, int index) {
    auto& r = reg();
    {
        std::shared_lock lk(r.mu);
        auto it = r.by_name.find(name);
        if (it != r.by_name.end()) {
            if (r.infos[it->second].kind != kind)
                throw Error("symbol '" + name + "' redeclared with a different kind");
            return it->second;
        }
    }
    std::unique_lock lk(r.mu);
    auto it = r.by_name.find(name);
    if (it != r.by_name.end()) {
        if (r.infos[it->second].kind != kind)
            throw Error("symbol '" + name + "' redeclared with a different kind");
        return it->second;
    }
    SymInfo info;
    info.name = name;
    info.kind = kind;
    info.index = index;
    return insert_locked(r, std::move(info));
}

int sym_lookup(const std::string& name) {
    auto& r = reg();
    std::shared_lock lk(r.mu);
    auto it = r.by_name.find(name);
    return it == r.by_name.end() ? -1 : it->second;
}

const SymInfo& sym_info(int id) {
    auto& r = reg();
    std::shared_lock lk(r.mu);
    return r.infos[static_cast<std::size_t>(id)];
}

std::uint64_t sym_key(int id) {
    auto& r = reg();
    std::shared_lock lk(r.mu);
    return r.keys[static_cast<std::size_t>(id)];
}

int sym_tau() {
    static int id = sym("tau", SymKind::Tau);
    return id;
}

int sym_tilde_next(int id) {
    const SymInfo info = sym_info(id);
    if (info.kind != SymKind::Param && info.kind != SymKind::Xi && info.kind != SymKind::XiUnk)
        throw Error("tilde applies only to parameter-like symbols: " + info.name);
    auto& r = reg();
    std::unique_lock lk(r.mu);
    std::string name = info.name + "~";
    auto it = r.by_name.find(name);
    if (it != r.by_name.end()) return it->second;
    SymInfo next = info;
    next.name = name;
    next.tilde = info.tilde + 1;
    return insert_locked(r, std::move(next));
}

int sym_radical(int base, int deg) {
    if (deg < 2) throw Error("radical degree must be >= 2");
    const SymInfo b = sym_info(base);
    if (b.kind == SymKind::Radical)
        return sym_radical(b.radical_base, b.radical_deg * deg);
    if (b.kind != SymKind::Coord && b.kind != SymKind::Mom && b.kind != SymKind::Const)
        throw Inconclusive("cannot take a radical of symbol " + b.name);
    std::string name = deg == 2 ? "sqrt(" + b.name + ")"
                                : b.name + "^(1/" + std::to_string(deg) + ")";
    auto& r = reg();
    std::unique_lock lk(r.mu);
    auto it = r.by_name.find(name);
    if (it != r.by_name.end()) return it->second;
    SymInfo info;
    info.name = name;
    info.kind = SymKind::Radical;
    info.index = b.index;
    info.radical_base = base;
    info.radical_deg = deg;
    return insert_locked(r, std::move(info));
}

int sym_partial(int of, int wrt) {
    const SymInfo f = sym_info(of);
    int root;
    std::vector<int> wrt_list;
    if (f.kind == SymKind::Theta) {
        root = of;
    } else if (f.kind == SymKind::ThetaPartial) {
        root = f.partial_of;
        wrt_list = f.partial_wrt;
    } else {
        throw Error("opaque partial of a non-free-function symbol: " + f.name);
    }
    wrt_list.push_back(wrt);
    std::sort(wrt_list.begin(), wrt_list.end());
    int root_index = sym_info(root).index;
    std::string name = "D[" + sym_info(root).name + ";";
    for (std::size_t i = 0; i < wrt_list.size(); ++i) {
        if (i) name += ",";
        name += sym_info(wrt_list[i]).name;
    }
    name += "]";
    auto& r = reg();
    std::unique_lock lk(r.mu);
    auto it = r.by_name.find(name);
    if (it != r.by_name.end()) return it->second;
    SymInfo info;
    info.name = name;
    info.kind = SymKind::ThetaPartial;
    info.index = root_index;
    info.partial_of = root;
    info.partial_wrt = std::move(wrt_list);
    return insert_locked(r, std::move(info));
}

void sym_assume(int id, bool nonzero, bool positive) {
    auto& r = reg();
    std::unique_lock lk(r.mu);
    auto& info = r.infos[static_cast<std::size_t>(id)];
    info.nonzero = info.nonzero || nonzero || positive;
    info.positive = info.positive || positive;
}

bool sym_certified_nonzero(int id) {
    const SymInfo& info = sym_info(id);
    if (info.nonzero || info.positive) return true;
    if (info.kind == SymKind::Radical) {
        const SymInfo& b = sym_info(info.radical_base);
        return b.positive;
    }
    return false;
}

} // namespace dirac
