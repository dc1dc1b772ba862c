#include <cmath>

#include "th/normalform.hpp"

namespace th {

CosExpansion beta_product(int a, int b)
{
    CosExpansion r;
    if (a == 0) {
        r[b] = 1;
    } else if (b == 0) {
        r[a] = 1;
    } else if (a == b) {
        r[0] = 1;
        r[2 * a] = M_SQRT1_2;
    } else {
        r[a + b] += M_SQRT1_2;
        r[std::abs(a - b)] += M_SQRT1_2;
    }
    return r;
}

CosExpansion beta_product(const CosExpansion& x, int b)
{
    CosExpansion r;
    for (auto [k, w] : x)
        for (auto [k2, w2] : beta_product(k, b)) r[k2] += w * w2;
    return r;
}

double bracket2(int a, int b, int k)
{
    auto e = beta_product(a, b);
    auto it = e.find(k);
    return it == e.end() ? 0.0 : it->second;
}

double bracket3(int a, int b, int c, int k)
{
    auto e = beta_product(beta_product(a, b), c);
    auto it = e.find(k);
    return it == e.end() ? 0.0 : it->second;
}

int case_of(int k1, int k2)
{
    if (k1 == 0 && k2 == 0) return 1;
    if (k1 == k2) return 2;
    if (k2 == 0) return 3;
    if (k1 == 0) return 4;
    return 5;
}

InnerProductTable inner_product_table(int k1, int k2, double)
{
    InnerProductTable t;
    const double s = M_SQRT1_2;
    switch (case_of(k1, k2)) {
    case 1:
        t = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
        break;
    case 2:
        t = {0, 0, 0, 0, 0, 0, 1.5, 1.5, 1.5, 1.5};
        break;
    case 3:
        t = {0, 0, 0, 1, 1, 1, 1.5, 1, 1, 1};
        break;
    case 4:
        t = {1, 1, 1, 0, 0, 0, 1, 1.5, 1, 1};
        break;
    default: {
        double d12 = k1 == 2 * k2 ? s : 0.0;
        double d21 = k2 == 2 * k1 ? s : 0.0;
        t = {0, d12, d12, d21, 0, d21, 1.5, 1.5, 1, 1};
    }
    }
    return t;
}

InnerProductTable exact_inner_product_table(int k1, int k2)
{
    InnerProductTable t;
    t.k1sq_k1 = bracket2(k1, k1, k1);
    t.k2sq_k1 = bracket2(k2, k2, k1);
    t.k1k2_k2 = bracket2(k1, k2, k2);
    t.k1sq_k2 = bracket2(k1, k1, k2);
    t.k2sq_k2 = bracket2(k2, k2, k2);
    t.k1k2_k1 = bracket2(k1, k2, k1);
    t.k1cu_k1 = bracket3(k1, k1, k1, k1);
    t.k2cu_k2 = bracket3(k2, k2, k2, k2);
    t.k1k2sq_k1 = bracket3(k1, k2, k2, k1);
    t.k1sqk2_k2 = bracket3(k1, k1, k2, k2);
    return t;
}

} // namespace th
