#include "qalt/job.hpp"

#include "json.hpp"

#include <sstream>

namespace qalt {

namespace {

using nlohmann::json;

Q parse_rational(const json& v, const std::string& path) {
    try {
        if (v.is_number_integer()) return Q((long)v.get<long long>());
        if (v.is_string()) return q(v.get<std::string>());
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(path + ": expected an integer or a rational string like \"-1/2\"");
}

Vec parse_element(const json& v, size_t dim, const std::string& path) {
    if (v.is_array()) {
        if (v.size() != dim)
            throw std::invalid_argument(path + ": expected " + std::to_string(dim) + " coordinates");
        Vec out(dim);
        for (size_t i = 0; i < dim; ++i) out[i] = parse_rational(v[i], path + "[" + std::to_string(i) + "]");
        return out;
    }
    // scalar shorthand: multiples of the unit
    Q c = parse_rational(v, path);
    Vec out(dim);
    out[0] = c;  // patched below for algebras whose unit is not e_0
    return out;
}

AlgebraPtr parse_algebra(const json& a) {
    if (!a.is_object()) throw std::invalid_argument("algebra: expected an object");
    std::string kind = a.value("kind", "");
    const json inv = a.contains("involution") ? a.at("involution") : json::object();
    std::string itype = inv.value("type", "");
    if (kind == "quaternion") {
        if (!a.contains("a") || !a.contains("b"))
            throw std::invalid_argument("algebra: quaternion needs parameters a and b");
        Q pa = parse_rational(a.at("a"), "algebra.a");
        Q pb = parse_rational(a.at("b"), "algebra.b");
        QuaternionInvolution qi;
        if (itype == "" || itype == "canonical") {
            // default
        } else if (itype == "orthogonal") {
            if (!inv.contains("u"))
                throw std::invalid_argument("algebra.involution: orthogonal involution needs u");
            qi.u = parse_element(inv.at("u"), 4, "algebra.involution.u");
        } else {
            throw std::invalid_argument("algebra.involution.type: expected canonical or orthogonal");
        }
        try {
            return make_quaternion(pa, pb, qi);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string("algebra: ") + e.what());
        }
    }
    if (kind == "matrix") {
        if (!a.contains("n")) throw std::invalid_argument("algebra: matrix needs the size n");
        size_t n = a.at("n").get<size_t>();
        MatrixInvolution mi;
        if (itype == "" || itype == "transpose") {
            // default
        } else if (itype == "conjugate") {
            if (!inv.contains("u"))
                throw std::invalid_argument("algebra.involution: conjugate involution needs u");
            const json& u = inv.at("u");
            if (!u.is_array() || u.size() != n)
                throw std::invalid_argument("algebra.involution.u: expected an n x n matrix");
            Mat m(n, n);
            for (size_t i = 0; i < n; ++i) {
                if (!u[i].is_array() || u[i].size() != n)
                    throw std::invalid_argument("algebra.involution.u: expected an n x n matrix");
                for (size_t j = 0; j < n; ++j)
                    m.at(i, j) = parse_rational(u[i][j], "algebra.involution.u");
            }
            mi.u = m;
        } else {
            throw std::invalid_argument("algebra.involution.type: expected transpose or conjugate");
        }
        try {
            return make_matrix_algebra(n, mi);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string("algebra: ") + e.what());
        }
    }
    throw std::invalid_argument("algebra.kind: expected quaternion or matrix");
}

std::string describe_class(const MixedElem& e) {
    return "grade " + e.g.str() + ": " + e.cls.describe();
}

json class_json(const MixedElem& e) {
    json out;
    out["grade"] = e.g.str();
    out["rdim"] = e.cls.rdim;
    if (e.cls.inv) out["invariants"] = e.cls.inv->to_string();
    if (e.cls.alt_k) out["antisymmetric"] = true;
    return out;
}

std::string gram_text(const HermForm& h) {
    std::ostringstream os;
    for (size_t s = 0; s < h.kdim; ++s) {
        for (size_t t = 0; t < h.kdim; ++t) {
            if (t) os << " ";
            os << "[";
            for (size_t c = 0; c < h.coeff->dim(); ++c) {
                if (c) os << ",";
                os << h.values[s][t][c].get_str();
            }
            os << "]";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace

std::vector<Vec> symmetric_entry_pool(const AlgebraPtr& a, size_t limit) {
    std::vector<Vec> pool;
    Subspace sym = a->symmetric_subspace(+1);
    std::vector<Vec> candidates{a->unit(), a->scalar(Q(2)), a->scalar(Q(-1)), a->scalar(Q(3))};
    for (size_t j = 0; j < sym.dim(); ++j) {
        candidates.push_back(sym.basis.col(j));
        candidates.push_back(vec_add(a->unit(), sym.basis.col(j)));
    }
    for (const Vec& c : candidates) {
        if (pool.size() >= limit) break;
        if (!a->inverse_of(c)) continue;
        if (a->apply_involution(c) != c) continue;
        bool dup = false;
        for (const Vec& p : pool) dup = dup || p == c;
        if (!dup) pool.push_back(c);
    }
    return pool;
}

JobSpec parse_job(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("input is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("input: expected a JSON object");
    JobSpec spec;
    if (!doc.contains("algebra")) throw std::invalid_argument("input: missing algebra");
    spec.algebra = parse_algebra(doc.at("algebra"));
    if (doc.contains("forms")) {
        const json& fs = doc.at("forms");
        if (!fs.is_array()) throw std::invalid_argument("forms: expected an array of entry lists");
        for (size_t i = 0; i < fs.size(); ++i) {
            const json& f = fs[i];
            std::string path = "forms[" + std::to_string(i) + "]";
            if (!f.is_array() || f.empty())
                throw std::invalid_argument(path + ": expected a nonempty list of diagonal entries");
            std::vector<Vec> entries;
            for (size_t k = 0; k < f.size(); ++k) {
                Vec e = parse_element(f[k], spec.algebra->dim(), path + "[" + std::to_string(k) + "]");
                if (!f[k].is_array()) e = spec.algebra->scalar(e[0]);  // scalar shorthand
                entries.push_back(std::move(e));
            }
            // constructor preconditions reported with the field path
            try {
                diagonal_form(spec.algebra, entries);
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(path + ": " + e.what());
            }
            spec.forms.push_back(std::move(entries));
        }
    }
    spec.command = doc.value("command", "");
    if (doc.contains("params")) {
        const json& p = doc.at("params");
        spec.params.d = p.value("d", spec.params.d);
        spec.params.truncation = p.value("truncation", spec.params.truncation);
        spec.params.samples = p.value("samples", spec.params.samples);
        spec.params.seed = p.value("seed", spec.params.seed);
        spec.params.cap = p.value("cap", spec.params.cap);
    }
    return spec;
}

JobResult run_job(const JobSpec& spec) {
    static const std::vector<std::string> known{"goldman", "trace-form", "invariants",
                                               "lambda", "det", "check-axioms"};
    if (std::find(known.begin(), known.end(), spec.command) == known.end())
        throw std::invalid_argument("command: expected one of goldman, trace-form, invariants, "
                                    "lambda, det, check-axioms");
    const AlgebraPtr& A = spec.algebra;
    JobResult out;
    json data;
    std::ostringstream os;
    data["algebra"] = A->describe();
    data["command"] = spec.command;
    os << "algebra: " << A->describe() << "\n";
    os << "dim " << A->dim() << ", degree " << A->degree() << ", involution "
       << (A->involution_type() == InvolutionType::Orthogonal ? "orthogonal" : "symplectic") << "\n";

    if (spec.command == "goldman") {
        GoldmanElement g = goldman_element(A);
        bool sandwich_ok = true;
        Mat s = g.sandwich_matrix();
        for (size_t k = 0; k < A->dim(); ++k)
            sandwich_ok = sandwich_ok &&
                          s.apply(A->basis_vec(k)) == vec_scale(A->trd(A->basis_vec(k)), A->unit());
        bool square_ok = g.square_coords() == kron_vec(A->unit(), A->unit());
        bool invol_ok = g.invol_coords() == g.coords();
        os << "goldman element: " << g.terms().size() << " terms\n";
        os << "sandwich(g) = Trd: " << (sandwich_ok ? "pass" : "FAIL") << "\n";
        os << "g^2 = 1 (x) 1:     " << (square_ok ? "pass" : "FAIL") << "\n";
        os << "(s (x) s)(g) = g:  " << (invol_ok ? "pass" : "FAIL") << "\n";
        if (spec.params.emit_gram) {
            os << "coordinates:";
            Vec c = g.coords();
            for (size_t i = 0; i < c.size(); ++i)
                if (sgn(c[i]) != 0)
                    os << " " << A->label(i / A->dim()) << "(x)" << A->label(i % A->dim()) << ":"
                       << c[i].get_str();
            os << "\n";
        }
        data["terms"] = g.terms().size();
        data["checks"] = {{"sandwich", sandwich_ok}, {"square", square_ok}, {"involution", invol_ok}};
        out.exit_code = (sandwich_ok && square_ok && invol_ok) ? 0 : 1;
    } else if (spec.command == "trace-form") {
        TraceFormTriple t = involution_trace_forms(A);
        WittInvariants full = invariants(diagonalize(t.full));
        WittInvariants plus = invariants(diagonalize(t.plus));
        os << "T_sigma:  " << full.to_string() << "\n";
        os << "T_sigma+: " << plus.to_string() << "\n";
        data["T"] = full.to_string();
        data["T+"] = plus.to_string();
        if (t.sym_minus.dim() > 0) {
            WittInvariants minus = invariants(diagonalize(t.minus));
            os << "T_sigma-: " << minus.to_string() << "\n";
            data["T-"] = minus.to_string();
        } else {
            os << "T_sigma-: zero form\n";
            data["T-"] = "dim=0";
        }
    } else if (spec.command == "invariants") {
        TraceFormTriple t = involution_trace_forms(A);
        os << "Sym+ dim " << t.sym_plus.dim() << ", Sym- dim " << t.sym_minus.dim() << "\n";
        os << "T_sigma:  " << invariants(diagonalize(t.full)).to_string() << "\n";
        os << "T_sigma+: " << invariants(diagonalize(t.plus)).to_string() << "\n";
        if (t.sym_minus.dim() > 0)
            os << "T_sigma-: " << invariants(diagonalize(t.minus)).to_string() << "\n";
        else
            os << "T_sigma-: zero form\n";
        MixedRing ring(A, true, spec.params.truncation, spec.params.cap);
        MixedElem unit = ring.herm_class(diagonal_form_scalars(A, {Q(1)}));
        MixedElem l2 = ring.lambda(2, unit);
        os << "lambda^2(<1>_sigma): " << describe_class(l2) << "\n";
        DetInvolution det = det_involution(A, spec.params.cap);
        os << "det(sigma): " << describe_class(det.cls);
        if (det.square_class) os << " square class " << *det.square_class;
        os << "\n";
        data["lambda2_unit"] = class_json(l2);
        if (det.square_class) data["det_sigma"] = *det.square_class;
        size_t idx = 0;
        for (const auto& entries : spec.forms) {
            HermForm h = diagonal_form(A, entries);
            MixedRing r2(A, true, spec.params.truncation, spec.params.cap);
            MixedElem cls = r2.herm_class(h);
            os << "form[" << idx << "]: " << describe_class(cls) << "\n";
            data["forms"][idx] = class_json(cls);
            if (spec.params.emit_gram) os << gram_text(h);
            ++idx;
        }
    } else if (spec.command == "lambda") {
        MixedRing ring(A, true, spec.params.truncation, spec.params.cap);
        size_t idx = 0;
        for (const auto& entries : spec.forms) {
            HermForm h = diagonal_form(A, entries);
            MixedElem cls = ring.herm_class(h);
            MixedElem l = ring.lambda(spec.params.d, cls);
            os << "form[" << idx << "]: lambda^" << spec.params.d << " = " << describe_class(l) << "\n";
            data["forms"][idx] = class_json(l);
            if (spec.params.emit_gram && l.cls.rep && l.cls.rep->kdim > 0) os << gram_text(*l.cls.rep);
            ++idx;
        }
        if (spec.forms.empty()) os << "no forms given\n";
    } else if (spec.command == "det") {
        DetInvolution det = det_involution(A, spec.params.cap);
        os << "det(sigma): " << describe_class(det.cls);
        if (det.square_class) {
            os << " square class " << *det.square_class;
            data["det_sigma"] = *det.square_class;
        }
        os << "\n";
        if (!det.note.empty()) os << "  (" << det.note << ")\n";
        MixedRing ring(A, true, spec.params.truncation, spec.params.cap);
        size_t idx = 0;
        for (const auto& entries : spec.forms) {
            HermForm h = diagonal_form(A, entries);
            MixedElem cls = ring.herm_class(h);
            MixedElem d = determinant_class(ring, cls);
            os << "form[" << idx << "]: det = " << describe_class(d) << "\n";
            data["forms"][idx] = class_json(d);
            ++idx;
        }
    } else if (spec.command == "check-axioms") {
        std::vector<AxiomReport> reports;
        reports.push_back(check_lambda_axioms(ZInstance{}, 0, 5, spec.params.seed));
        reports.push_back(check_lambda_axioms(ZMod2Instance{}, spec.params.samples, 4, spec.params.seed));
        reports.push_back(check_lambda_axioms(SwkInstance{}, spec.params.samples, 4, spec.params.seed));
        MixedSWInstance mixed(A, symmetric_entry_pool(A),
                              A->kind() == Algebra::Kind::Quaternion &&
                                      A->involution_type() == InvolutionType::Symplectic
                                  ? 100
                                  : 2);
        reports.push_back(check_lambda_axioms(mixed, spec.params.samples, 3, spec.params.seed));
        reports.push_back(
            swn_axiom_suite(A, spec.params.truncation, std::min<size_t>(spec.params.samples, 4),
                            spec.params.seed, spec.params.cap));
        reports.push_back(contraction_check(A, spec.params.truncation, spec.params.seed, spec.params.cap));
        size_t failures = 0;
        for (const auto& r : reports) {
            os << r.to_text() << "\n";
            failures += r.failures();
            data["reports"][r.instance] = r.failures();
        }
        os << (failures == 0 ? "all instances pass" : "FAILURES PRESENT") << "\n";
        out.exit_code = failures == 0 ? 0 : 1;
    }

    out.text = os.str();
    out.json = data.dump(2) + "\n";
    return out;
}

}  // namespace qalt
