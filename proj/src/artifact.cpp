#include "acirc/artifact.hpp"

#include <algorithm>
#include <sstream>

#include "acirc/perm.hpp"
#include "acirc/rng.hpp"

namespace acirc {

void attach_target(ProjectionMatrix& m, const Poly& target) {
    m.target = target;
    m.target_hash = poly_hash(target);
}

namespace {

Poly symbolic_identity(const ProjectionMatrix& m, const ExpandOptions& opts) {
    if (m.identity == CertifiedIdentity::DetEquals) {
        if (m.side() > 10) fail(Errc::BudgetExceeded, "det side");
        return symbolic_det(m.matrix, m.field);
    }
    return ryser_symbolic(m.matrix, m.field, opts);
}

Fe point_identity(const ProjectionMatrix& m, const std::map<std::string, Fe>& pt) {
    return m.identity == CertifiedIdentity::DetEquals
               ? eval_atom_matrix_det(m.matrix, m.field, pt)
               : eval_atom_matrix_per(m.matrix, m.field, pt);
}

std::set<std::string> matrix_vars(const AtomMatrix& m) {
    std::set<std::string> vs;
    for (const auto& row : m)
        for (const auto& a : row)
            if (a.is_var()) vs.insert(*a.var);
    return vs;
}

std::string point_str(const std::map<std::string, Fe>& pt) {
    std::ostringstream out;
    for (const auto& [v, x] : pt) out << v << "=" << x.str() << " ";
    return out.str();
}

} // namespace

VerifyReport verify_projection(const ProjectionMatrix& m, std::uint64_t seed,
                               const ExpandOptions& opts) {
    VerifyReport rep;
    if (!m.target && !m.source_circuit) {
        fail(Errc::UnknownArtifactKind, "projection carries neither target nor source");
    }

    if (m.target && m.target_hash != poly_hash(*m.target)) {
        rep.pass = false;
        rep.mode = "hash";
        rep.detail = "embedded target does not match its hash";
        return rep;
    }

    // symbolic route when the side is small enough
    if (m.target) {
        bool small = m.identity == CertifiedIdentity::DetEquals ? m.side() <= 8 : m.side() <= 12;
        if (small) {
            try {
                Poly got = symbolic_identity(m, opts);
                rep.mode = "symbolic";
                rep.pass = got == *m.target;
                if (!rep.pass) rep.detail = "symbolic expansion differs from the target";
                return rep;
            } catch (const Error& e) {
                if (e.code() != Errc::BudgetExceeded) throw;
            }
        }
    }

    // randomized route: compare against target values or the source circuit's
    // exponential sum at seeded points
    rep.mode = "randomized";
    const Field& f = m.field;
    std::uint64_t degree = m.side() + 1;
    std::uint64_t span = f.is_prime_field() ? f.characteristic() : 2 * degree + 1;
    if (f.is_prime_field() && f.characteristic() <= degree)
        fail(Errc::FieldTooSmall, "cannot verify by evaluation");

    std::optional<Circuit> source;
    if (m.source_circuit) source = parse_circuit(*m.source_circuit);

    std::set<std::string> vars = matrix_vars(m.matrix);
    if (m.target)
        for (const auto& v : m.target->variables()) vars.insert(v);
    if (source)
        for (const auto& v : source->vars()) vars.insert(v);

    Rng rng(seed);
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        std::map<std::string, Fe> pt;
        for (const auto& v : vars)
            if (std::find(m.summed_vars.begin(), m.summed_vars.end(), v) == m.summed_vars.end())
                pt[v] = f.element(static_cast<long>(rng.below(span)));
        Fe lhs = point_identity(m, pt);
        Fe rhs;
        if (m.target) {
            rhs = m.target->evaluate(pt, f);
        } else {
            // sum the source over all 0/1 assignments of the summed variables
            rhs = f.zero();
            std::size_t k = m.summed_vars.size();
            if (k > 20) fail(Errc::BudgetExceeded, "too many summed variables");
            for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
                auto full = pt;
                for (std::size_t i = 0; i < k; ++i)
                    full[m.summed_vars[i]] = (mask >> i) & 1 ? f.one() : f.zero();
                rhs = rhs + evaluate(*source, full)[0];
            }
        }
        if (!(lhs == rhs)) {
            rep.pass = false;
            rep.detail = "distinguishing point: " + point_str(pt);
            return rep;
        }
    }
    rep.pass = true;
    return rep;
}

VerifyReport verify_artifact_text(const std::string& text, std::uint64_t seed,
                                  const ExpandOptions& opts) {
    std::istringstream in(text);
    std::string first;
    in >> first;
    if (first == "matrix") return verify_projection(parse_projection(text), seed, opts);
    if (first == "family") {
        // re-generate from the recorded parameters; gen_family enforces
        // construction-vs-oracle agreement itself
        std::istringstream ls(text);
        std::string line, name, fclass;
        FamilyParams p;
        std::optional<Field> field;
        while (std::getline(ls, line)) {
            std::istringstream l2(line);
            std::string kw;
            l2 >> kw;
            if (kw == "family") l2 >> name;
            else if (kw == "n") l2 >> p.n;
            else if (kw == "d") l2 >> p.d;
            else if (kw == "q") {
                std::uint64_t q;
                l2 >> q;
                field = Field::prime(q);
            } else if (kw == "field") {
                std::string k;
                l2 >> k;
                if (k == "Q") field = Field::rationals();
                else {
                    std::uint64_t pp;
                    l2 >> pp;
                    field = Field::prime(pp);
                }
            }
        }
        VerifyReport rep;
        FamilyDescriptor fd = gen_family(name, p, field.value_or(Field::rationals()));
        rep.mode = "regenerated";
        rep.pass = true;
        rep.detail = fd.oracle_verified ? "construction matches its oracle"
                                        : "instance beyond oracle budget; construction rebuilt";
        return rep;
    }
    fail(Errc::UnknownArtifactKind, "unrecognized artifact header '" + first + "'");
}

} // namespace acirc
