#include "fdcalc/serialize.hpp"

#include <algorithm>

namespace fdcalc {

namespace {

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError("SchemaError at " + path + "/" + key + ": missing");
    return j.at(key);
}

std::string need_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError("SchemaError at " + path + ": expected a string");
    return j.get<std::string>();
}

int need_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError("SchemaError at " + path + ": expected an integer");
    return j.get<int>();
}

// "(x,y)" with the split at the top-level comma (object names contain no
// parentheses except sequence brackets, which use <>)
std::pair<std::string, std::string> split_cell_key(const std::string& key, const std::string& path) {
    if (key.size() < 3 || key.front() != '(' || key.back() != ')')
        throw SchemaError("SchemaError at " + path + ": bad cell key " + key);
    std::string body = key.substr(1, key.size() - 2);
    int depth = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '<') ++depth;
        if (c == '>') --depth;
        if (c == ',' && depth == 0) return {body.substr(0, i), body.substr(i + 1)};
    }
    throw SchemaError("SchemaError at " + path + ": bad cell key " + key);
}

}  // namespace

json cat_to_json(const CatPtr& cat) {
    json j;
    j["objects"] = cat->objects;
    json morphs = json::array();
    for (const auto& m : cat->morphisms)
        morphs.push_back({{"id", m.id}, {"src", cat->objects[m.src]}, {"dst", cat->objects[m.dst]}});
    j["morphisms"] = morphs;
    json ids = json::object();
    for (int a = 0; a < cat->n_objects(); ++a) ids[cat->objects[a]] = cat->morphisms[cat->identity[a]].id;
    j["identities"] = ids;
    json comp = json::array();
    for (int g = 0; g < cat->n_morphisms(); ++g)
        for (int f = 0; f < cat->n_morphisms(); ++f)
            if (cat->comp[g][f] >= 0)
                comp.push_back({cat->morphisms[g].id, cat->morphisms[f].id, cat->morphisms[cat->comp[g][f]].id});
    j["compose"] = comp;
    if (cat->gen_kind != GenKind::None) {
        j["generated"] = {{"kind", cat->gen_kind == GenKind::Bang ? "bang" : "down"},
                          {"base", cat_to_json(cat->gen_base)},
                          {"maxArity", cat->max_arity}};
    }
    return j;
}

CatPtr cat_from_json(const json& j, const std::string& path) {
    if (j.contains("generated")) {
        const auto& g = j.at("generated");
        auto base = cat_from_json(need(g, "base", path + "/generated"), path + "/generated/base");
        int arity = need_int(need(g, "maxArity", path + "/generated"), path + "/generated/maxArity");
        std::string kind = need_string(need(g, "kind", path + "/generated"), path + "/generated/kind");
        CatPtr rebuilt;
        if (kind == "bang")
            rebuilt = free_symmetric(base, arity);
        else if (kind == "down")
            rebuilt = free_soft(base, arity);
        else
            throw SchemaError("SchemaError at " + path + "/generated/kind: unknown kind " + kind);
        // sanity against the serialized tables when present
        if (j.contains("objects") && j.at("objects").size() != rebuilt->objects.size())
            throw SchemaError("SchemaError at " + path + ": generated header does not match the object list");
        return rebuilt;
    }
    RawCategory raw;
    for (const auto& o : need(j, "objects", path)) raw.objects.push_back(need_string(o, path + "/objects"));
    for (const auto& m : need(j, "morphisms", path)) {
        raw.morphisms.push_back({need_string(need(m, "id", path + "/morphisms"), path),
                                 need_string(need(m, "src", path + "/morphisms"), path),
                                 need_string(need(m, "dst", path + "/morphisms"), path)});
    }
    for (const auto& [obj, mid] : need(j, "identities", path).items())
        raw.identities.push_back({obj, need_string(mid, path + "/identities")});
    for (const auto& triple : need(j, "compose", path)) {
        if (!triple.is_array() || triple.size() != 3)
            throw SchemaError("SchemaError at " + path + "/compose: expected [g, f, gf] triples");
        raw.compose.push_back({need_string(triple[0], path + "/compose"), need_string(triple[1], path + "/compose"),
                               need_string(triple[2], path + "/compose")});
    }
    try {
        return validate_category(raw);
    } catch (const ValidationError& e) {
        throw SchemaError("SchemaError at " + path + ": " + e.what());
    }
}

json presheaf_to_json(const Presheaf& p) {
    json j;
    j["base"] = cat_to_json(p.base);
    json elems = json::object();
    for (int x = 0; x < p.base->n_objects(); ++x) elems[p.base->objects[x]] = p.elems[x];
    j["elems"] = elems;
    json action = json::object();
    for (int m = 0; m < p.base->n_morphisms(); ++m) {
        json table = json::object();
        int s = p.base->morphisms[m].src, d = p.base->morphisms[m].dst;
        for (int e = 0; e < p.n_at(s); ++e) table[p.elems[s][e]] = p.elems[d][p.apply(m, e)];
        action[p.base->morphisms[m].id] = table;
    }
    j["action"] = action;
    return j;
}

Presheaf presheaf_from_json(const json& j, const std::string& path) {
    Presheaf p;
    p.base = cat_from_json(need(j, "base", path), path + "/base");
    p.elems.resize(p.base->n_objects());
    for (const auto& [obj, list] : need(j, "elems", path).items()) {
        int x = p.base->obj_index(obj);
        if (x < 0) throw SchemaError("SchemaError at " + path + "/elems: unknown object " + obj);
        for (const auto& name : list) p.elems[x].push_back(need_string(name, path + "/elems"));
    }
    p.act.resize(p.base->n_morphisms());
    const auto& action = need(j, "action", path);
    for (int m = 0; m < p.base->n_morphisms(); ++m) {
        int s = p.base->morphisms[m].src, d = p.base->morphisms[m].dst;
        const std::string& mid = p.base->morphisms[m].id;
        if (!action.contains(mid)) {
            if (p.n_at(s) > 0) throw SchemaError("SchemaError at " + path + "/action/" + mid + ": missing");
            continue;
        }
        p.act[m].assign(p.n_at(s), -1);
        for (const auto& [from, to] : action.at(mid).items()) {
            int e = p.find_elem(s, from);
            int v = p.find_elem(d, need_string(to, path + "/action/" + mid));
            if (e < 0 || v < 0)
                throw SchemaError("SchemaError at " + path + "/action/" + mid + ": unknown element");
            p.act[m][e] = v;
        }
        for (int e = 0; e < p.n_at(s); ++e)
            if (p.act[m][e] < 0)
                throw SchemaError("SchemaError at " + path + "/action/" + mid + ": not total");
    }
    try {
        validate_presheaf(p);
    } catch (const ValidationError& e) {
        throw SchemaError("SchemaError at " + path + ": " + e.what());
    }
    return p;
}

json subobject_to_json(const Subobject& s) {
    json j;
    j["parent"] = presheaf_to_json(s.parent);
    json subset = json::object();
    for (int x = 0; x < s.parent.base->n_objects(); ++x) {
        json names = json::array();
        for (int e : s.subset[x]) names.push_back(s.parent.elems[x][e]);
        subset[s.parent.base->objects[x]] = names;
    }
    j["subset"] = subset;
    return j;
}

Subobject subobject_from_json(const json& j, const std::string& path) {
    Subobject s;
    s.parent = presheaf_from_json(need(j, "parent", path), path + "/parent");
    s.subset.resize(s.parent.base->n_objects());
    for (const auto& [obj, list] : need(j, "subset", path).items()) {
        int x = s.parent.base->obj_index(obj);
        if (x < 0) throw SchemaError("SchemaError at " + path + "/subset: unknown object " + obj);
        for (const auto& name : list) {
            int e = s.parent.find_elem(x, need_string(name, path + "/subset"));
            if (e < 0) throw SchemaError("SchemaError at " + path + "/subset: unknown element");
            s.subset[x].push_back(e);
        }
        std::sort(s.subset[x].begin(), s.subset[x].end());
        s.subset[x].erase(std::unique(s.subset[x].begin(), s.subset[x].end()), s.subset[x].end());
    }
    try {
        validate_subobject(s);
    } catch (const ValidationError& e) {
        throw SchemaError("SchemaError at " + path + ": " + e.what());
    }
    return s;
}

json prof_to_json(const Profunctor& p) {
    json j;
    j["convention"] = "cells(a,b) contravariant in a, covariant in b";
    j["src"] = cat_to_json(p.src);
    j["dst"] = cat_to_json(p.dst);
    json cells = json::object();
    for (int a = 0; a < p.src->n_objects(); ++a)
        for (int b = 0; b < p.dst->n_objects(); ++b)
            cells["(" + p.src->objects[a] + "," + p.dst->objects[b] + ")"] = p.cells[a][b];
    j["cells"] = cells;
    json left = json::object();
    for (int f = 0; f < p.src->n_morphisms(); ++f) {
        json per = json::object();
        int from = p.src->morphisms[f].dst, to = p.src->morphisms[f].src;
        for (int b = 0; b < p.dst->n_objects(); ++b) {
            json table = json::object();
            for (int e = 0; e < p.n_cell(from, b); ++e)
                table[p.cells[from][b][e]] = p.cells[to][b][p.left[f][b][e]];
            per["(" + p.src->objects[from] + "," + p.dst->objects[b] + ")"] = table;
        }
        left[p.src->morphisms[f].id] = per;
    }
    j["leftAction"] = left;
    json right = json::object();
    for (int g = 0; g < p.dst->n_morphisms(); ++g) {
        json per = json::object();
        int from = p.dst->morphisms[g].src, to = p.dst->morphisms[g].dst;
        for (int a = 0; a < p.src->n_objects(); ++a) {
            json table = json::object();
            for (int e = 0; e < p.n_cell(a, from); ++e)
                table[p.cells[a][from][e]] = p.cells[a][to][p.right[g][a][e]];
            per["(" + p.src->objects[a] + "," + p.dst->objects[from] + ")"] = table;
        }
        right[p.dst->morphisms[g].id] = per;
    }
    j["rightAction"] = right;
    return j;
}

Profunctor prof_from_json(const json& j, const std::string& path) {
    Profunctor p;
    p.src = cat_from_json(need(j, "src", path), path + "/src");
    p.dst = cat_from_json(need(j, "dst", path), path + "/dst");
    p.cells.assign(p.src->n_objects(), std::vector<std::vector<std::string>>(p.dst->n_objects()));
    for (const auto& [key, list] : need(j, "cells", path).items()) {
        auto [an, bn] = split_cell_key(key, path + "/cells");
        int a = p.src->obj_index(an), b = p.dst->obj_index(bn);
        if (a < 0 || b < 0) throw SchemaError("SchemaError at " + path + "/cells: unknown objects in " + key);
        for (const auto& name : list) p.cells[a][b].push_back(need_string(name, path + "/cells"));
    }
    auto parse_action = [&](const json& actions, bool is_left) {
        auto& target = is_left ? p.left : p.right;
        const CatPtr& cat = is_left ? p.src : p.dst;
        target.resize(cat->n_morphisms());
        for (int m = 0; m < cat->n_morphisms(); ++m) {
            const std::string& mid = cat->morphisms[m].id;
            int from = is_left ? cat->morphisms[m].dst : cat->morphisms[m].src;
            int to = is_left ? cat->morphisms[m].src : cat->morphisms[m].dst;
            int other_n = is_left ? p.dst->n_objects() : p.src->n_objects();
            target[m].resize(other_n);
            for (int o = 0; o < other_n; ++o) {
                int na = is_left ? p.n_cell(from, o) : p.n_cell(o, from);
                target[m][o].assign(na, -1);
                if (na == 0) continue;
                std::string key = is_left ? "(" + p.src->objects[from] + "," + p.dst->objects[o] + ")"
                                          : "(" + p.src->objects[o] + "," + p.dst->objects[from] + ")";
                if (!actions.contains(mid) || !actions.at(mid).contains(key))
                    throw SchemaError("SchemaError at " + path + ": missing action " + mid + " " + key);
                for (const auto& [fromName, toName] : actions.at(mid).at(key).items()) {
                    int e = is_left ? p.find_cell_elem(from, o, fromName) : p.find_cell_elem(o, from, fromName);
                    std::string tn = need_string(toName, path);
                    int v = is_left ? p.find_cell_elem(to, o, tn) : p.find_cell_elem(o, to, tn);
                    if (e < 0 || v < 0) throw SchemaError("SchemaError at " + path + ": unknown cell element");
                    target[m][o][e] = v;
                }
                for (int e = 0; e < na; ++e)
                    if (target[m][o][e] < 0)
                        throw SchemaError("SchemaError at " + path + ": action " + mid + " not total");
            }
        }
    };
    parse_action(need(j, "leftAction", path), true);
    parse_action(need(j, "rightAction", path), false);
    try {
        validate_profunctor(p);
    } catch (const ValidationError& e) {
        throw SchemaError("SchemaError at " + path + ": " + e.what());
    }
    return p;
}

json symseq_to_json(const SymSeq& s) {
    json j;
    j["mode"] = s.mode == GenKind::Bang ? "strict" : "soft";
    j["base"] = cat_to_json(s.base);
    j["target"] = cat_to_json(s.target);
    j["maxArity"] = s.max_arity;
    json cells = json::object();
    for (int so = 0; so < s.seq_cat->n_objects(); ++so)
        for (int b = 0; b < s.target->n_objects(); ++b)
            cells["(" + s.seq_cat->objects[so] + "," + s.target->objects[b] + ")"] = s.prof.cells[so][b];
    j["cells"] = cells;
    json seq_action = json::object();
    for (int m = 0; m < s.seq_cat->n_morphisms(); ++m) {
        json per = json::object();
        int from = s.seq_cat->morphisms[m].dst, to = s.seq_cat->morphisms[m].src;
        const auto& data = s.seq_cat->seq_morphisms[m];
        json sig = json::array();
        for (int v : data.sigma) sig.push_back(v);
        json comps = json::array();
        for (int c : data.components) comps.push_back(s.base->morphisms[c].id);
        per["sigma"] = sig;
        per["components"] = comps;
        per["srcSeq"] = s.seq_cat->objects[s.seq_cat->morphisms[m].src];
        per["dstSeq"] = s.seq_cat->objects[s.seq_cat->morphisms[m].dst];
        json tables = json::object();
        for (int b = 0; b < s.target->n_objects(); ++b) {
            json table = json::object();
            for (int e = 0; e < s.prof.n_cell(from, b); ++e)
                table[s.prof.cells[from][b][e]] = s.prof.cells[to][b][s.prof.left[m][b][e]];
            tables["(" + s.seq_cat->objects[from] + "," + s.target->objects[b] + ")"] = table;
        }
        per["tables"] = tables;
        seq_action[s.seq_cat->morphisms[m].id] = per;
    }
    j["seqAction"] = seq_action;
    json target_action = json::object();
    for (int g = 0; g < s.target->n_morphisms(); ++g) {
        json per = json::object();
        int from = s.target->morphisms[g].src, to = s.target->morphisms[g].dst;
        for (int so = 0; so < s.seq_cat->n_objects(); ++so) {
            json table = json::object();
            for (int e = 0; e < s.prof.n_cell(so, from); ++e)
                table[s.prof.cells[so][from][e]] = s.prof.cells[so][to][s.prof.right[g][so][e]];
            per["(" + s.seq_cat->objects[so] + "," + s.target->objects[from] + ")"] = table;
        }
        target_action[s.target->morphisms[g].id] = per;
    }
    j["targetAction"] = target_action;
    return j;
}

SymSeq symseq_from_json(const json& j, const std::string& path) {
    std::string mode_s = need_string(need(j, "mode", path), path + "/mode");
    GenKind mode = mode_s == "strict" ? GenKind::Bang : GenKind::Down;
    if (mode_s != "strict" && mode_s != "soft")
        throw SchemaError("SchemaError at " + path + "/mode: expected strict or soft");
    auto base = cat_from_json(need(j, "base", path), path + "/base");
    auto target = cat_from_json(need(j, "target", path), path + "/target");
    int arity = need_int(need(j, "maxArity", path), path + "/maxArity");
    auto gen_cat = mode == GenKind::Bang ? free_symmetric(base, arity) : free_soft(base, arity);
    Profunctor p;
    p.src = gen_cat;
    p.dst = target;
    p.cells.assign(gen_cat->n_objects(), std::vector<std::vector<std::string>>(target->n_objects()));
    for (const auto& [key, list] : need(j, "cells", path).items()) {
        auto [sn, bn] = split_cell_key(key, path + "/cells");
        int so = gen_cat->obj_index(sn), b = target->obj_index(bn);
        if (so < 0 || b < 0) throw SchemaError("SchemaError at " + path + "/cells: unknown objects in " + key);
        for (const auto& name : list) p.cells[so][b].push_back(need_string(name, path + "/cells"));
    }
    const auto& seq_action = need(j, "seqAction", path);
    p.left.resize(gen_cat->n_morphisms());
    for (int m = 0; m < gen_cat->n_morphisms(); ++m) {
        const std::string& mid = gen_cat->morphisms[m].id;
        int from = gen_cat->morphisms[m].dst, to = gen_cat->morphisms[m].src;
        p.left[m].resize(target->n_objects());
        for (int b = 0; b < target->n_objects(); ++b) {
            int na = p.n_cell(from, b);
            p.left[m][b].assign(na, -1);
            if (na == 0) continue;
            std::string key = "(" + gen_cat->objects[from] + "," + target->objects[b] + ")";
            if (!seq_action.contains(mid) || !seq_action.at(mid).contains("tables") ||
                !seq_action.at(mid).at("tables").contains(key))
                throw SchemaError("SchemaError at " + path + "/seqAction: missing " + mid + " " + key);
            for (const auto& [fromName, toName] : seq_action.at(mid).at("tables").at(key).items()) {
                int e = p.find_cell_elem(from, b, fromName);
                int v = p.find_cell_elem(to, b, need_string(toName, path));
                if (e < 0 || v < 0) throw SchemaError("SchemaError at " + path + "/seqAction: unknown element");
                p.left[m][b][e] = v;
            }
            for (int e = 0; e < na; ++e)
                if (p.left[m][b][e] < 0)
                    throw SchemaError("SchemaError at " + path + "/seqAction: table not total");
        }
    }
    const auto& target_action = need(j, "targetAction", path);
    p.right.resize(target->n_morphisms());
    for (int g = 0; g < target->n_morphisms(); ++g) {
        const std::string& gid = target->morphisms[g].id;
        int from = target->morphisms[g].src, to = target->morphisms[g].dst;
        p.right[g].resize(gen_cat->n_objects());
        for (int so = 0; so < gen_cat->n_objects(); ++so) {
            int na = p.n_cell(so, from);
            p.right[g][so].assign(na, -1);
            if (na == 0) continue;
            std::string key = "(" + gen_cat->objects[so] + "," + target->objects[from] + ")";
            if (!target_action.contains(gid) || !target_action.at(gid).contains(key))
                throw SchemaError("SchemaError at " + path + "/targetAction: missing " + gid + " " + key);
            for (const auto& [fromName, toName] : target_action.at(gid).at(key).items()) {
                int e = p.find_cell_elem(so, from, fromName);
                int v = p.find_cell_elem(so, to, need_string(toName, path));
                if (e < 0 || v < 0) throw SchemaError("SchemaError at " + path + "/targetAction: unknown element");
                p.right[g][so][e] = v;
            }
        }
    }
    try {
        return make_symseq(mode, base, target, arity, std::move(p));
    } catch (const ValidationError& e) {
        throw SchemaError("SchemaError at " + path + ": " + e.what());
    }
}

json expr_to_json(const ExprPtr& f) {
    json j;
    switch (f->kind) {
        case ExprKind::Identity:
            j["variant"] = "Identity";
            j["cat"] = cat_to_json(f->dom);
            break;
        case ExprKind::Constant:
            j["variant"] = "Constant";
            j["dom"] = cat_to_json(f->dom);
            j["value"] = presheaf_to_json(f->constant);
            break;
        case ExprKind::Linear:
            j["variant"] = "Linear";
            j["prof"] = prof_to_json(f->prof);
            break;
        case ExprKind::Monomial:
            j["variant"] = "Monomial";
            j["prof"] = prof_to_json(f->prof);
            break;
        case ExprKind::AnalyticStrict:
        case ExprKind::AnalyticSoft:
            j["variant"] = f->kind == ExprKind::AnalyticStrict ? "AnalyticStrict" : "AnalyticSoft";
            j["seq"] = symseq_to_json(f->seq);
            break;
        case ExprKind::Sum:
        case ExprKind::Product:
            j["variant"] = f->kind == ExprKind::Sum ? "Sum" : "Product";
            j["lhs"] = expr_to_json(f->lhs);
            j["rhs"] = expr_to_json(f->rhs);
            break;
        case ExprKind::Compose:
            j["variant"] = "Compose";
            j["outer"] = expr_to_json(f->lhs);
            j["inner"] = expr_to_json(f->rhs);
            break;
    }
    return j;
}

ExprPtr expr_from_json(const json& j, const std::string& path) {
    std::string variant = need_string(need(j, "variant", path), path + "/variant");
    if (variant == "Identity") return identity_expr(cat_from_json(need(j, "cat", path), path + "/cat"));
    if (variant == "Constant")
        return constant_expr(cat_from_json(need(j, "dom", path), path + "/dom"),
                             presheaf_from_json(need(j, "value", path), path + "/value"));
    if (variant == "Linear") return linear_expr(prof_from_json(need(j, "prof", path), path + "/prof"));
    if (variant == "Monomial") return monomial_expr(prof_from_json(need(j, "prof", path), path + "/prof"));
    if (variant == "AnalyticStrict" || variant == "AnalyticSoft") {
        auto seq = symseq_from_json(need(j, "seq", path), path + "/seq");
        if ((variant == "AnalyticStrict") != (seq.mode == GenKind::Bang))
            throw SchemaError("SchemaError at " + path + ": variant does not match the sequence mode");
        return analytic_expr(std::move(seq));
    }
    if (variant == "Sum")
        return sum_expr(expr_from_json(need(j, "lhs", path), path + "/lhs"),
                        expr_from_json(need(j, "rhs", path), path + "/rhs"));
    if (variant == "Product")
        return product_expr(expr_from_json(need(j, "lhs", path), path + "/lhs"),
                            expr_from_json(need(j, "rhs", path), path + "/rhs"));
    if (variant == "Compose")
        return compose_expr(expr_from_json(need(j, "outer", path), path + "/outer"),
                            expr_from_json(need(j, "inner", path), path + "/inner"));
    throw SchemaError("SchemaError at " + path + "/variant: unknown variant " + variant);
}

}  // namespace fdcalc
