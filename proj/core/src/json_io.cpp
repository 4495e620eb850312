#include "hypercone/json_io.hpp"

#include <nlohmann/json.hpp>

namespace hypercone {

using nlohmann::json;

json polynomial_to_json(const PolynomialForm& poly) {
    json j;
    switch (poly.kind()) {
        case PolynomialForm::Kind::Sparse: {
            j["n"] = poly.n();
            j["d"] = poly.degree();
            json terms = json::array();
            for (const Monomial& m : poly.monomials())
                terms.push_back({{"exp", m.exponents}, {"coef", m.coefficient}});
            j["monomials"] = std::move(terms);
            break;
        }
        case PolynomialForm::Kind::EleSym:
            j["elesym"] = {{"n", poly.n()}, {"k", poly.elesym_k()}};
            break;
        case PolynomialForm::Kind::LinearFactors: {
            json factors = json::array();
            for (const Vec& a : poly.factors())
                factors.push_back(std::vector<double>(a.data(), a.data() + a.size()));
            j["factors"] = std::move(factors);
            break;
        }
    }
    return j;
}

namespace {
Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("json: expected an array of numbers");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}
} // namespace

PolynomialForm polynomial_from_json(const json& j) {
    if (j.contains("elesym")) {
        const auto& e = j.at("elesym");
        return PolynomialForm::elesym(e.at("n").get<int>(), e.at("k").get<int>());
    }
    if (j.contains("factors")) {
        std::vector<Vec> factors;
        for (const auto& row : j.at("factors")) factors.push_back(vec_from_json(row));
        return PolynomialForm::linear_factors(std::move(factors));
    }
    if (j.contains("monomials")) {
        const int n = j.at("n").get<int>();
        const int d = j.at("d").get<int>();
        std::vector<Monomial> terms;
        for (const auto& t : j.at("monomials")) {
            Monomial m;
            m.exponents = t.at("exp").get<std::vector<int>>();
            m.coefficient = t.at("coef").get<double>();
            terms.push_back(std::move(m));
        }
        PolynomialForm p = PolynomialForm::sparse(n, std::move(terms));
        if (p.degree() != d)
            throw std::invalid_argument("polynomial json: declared degree disagrees with monomials");
        return p;
    }
    throw std::invalid_argument("polynomial json: expected one of monomials/elesym/factors");
}

std::shared_ptr<const ConeOracle> cone_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "hyperbolicity") {
        PolynomialForm poly = polynomial_from_json(j.at("poly"));
        Vec e = vec_from_json(j.at("e"));
        const bool isometric = j.value("isometric", false);
        return std::make_shared<HyperbolicityCone>(HyperbolicForm(std::move(poly), std::move(e), isometric));
    }
    if (kind == "pcone") return std::make_shared<PCone>(j.at("p").get<double>(), j.at("n").get<int>());
    if (kind == "orthant") return std::make_shared<NonnegativeOrthant>(j.at("n").get<int>());
    if (kind == "derivative_orthant")
        return derivative_relaxation(j.at("n").get<int>(), j.at("k").get<int>());
    throw std::invalid_argument("cone json: unknown kind '" + kind + "'");
}

ConicProgram program_from_json(const json& j) {
    ConicProgram p;
    const auto& obj = j.at("objective");
    Vec c = vec_from_json(obj.at("c"));
    if (obj.at("Q").is_string() && obj.at("Q").get<std::string>() == "identity") {
        p.objective = QuadraticObjective::identity(std::move(c));
    } else {
        const auto& qj = obj.at("Q");
        Mat Q(qj.size(), qj.size() ? qj[0].size() : 0);
        for (std::size_t r = 0; r < qj.size(); ++r)
            for (std::size_t col = 0; col < qj[r].size(); ++col)
                Q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = qj[r][col].get<double>();
        p.objective = QuadraticObjective(std::move(Q), std::move(c));
    }
    if (j.at("T").is_string() && j.at("T").get<std::string>() == "identity") {
        p.T_identity = true;
    } else {
        const auto& tj = j.at("T");
        p.T_identity = false;
        p.T.resize(tj.size(), tj.size() ? tj[0].size() : 0);
        for (std::size_t r = 0; r < tj.size(); ++r)
            for (std::size_t col = 0; col < tj[r].size(); ++col)
                p.T(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = tj[r][col].get<double>();
    }
    p.b = vec_from_json(j.at("b"));
    p.cone = cone_from_json(j.at("cone"));
    p.validate();
    return p;
}

InstanceSpec instance_spec_from_json(const json& j) {
    InstanceSpec spec;
    spec.cone = cone_from_json(j.at("cone"));
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.count = j.at("count").get<int>();
    spec.reject_threshold = j.value("reject_threshold", -1e-4);
    return spec;
}

} // namespace hypercone
