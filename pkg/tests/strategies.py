"""Shared hypothesis strategies."""

from hypothesis import strategies as st

atoms = st.sampled_from([
    "n", "1", "2", "3", "1/2", "n!", "(n+1)!", "(-1)^n", "2^n", "(1/3)^n", "binomial(2*n,n)", "binomial(n+2,2)",
    "chi(3,1)", "chi(2,0)", "sin(n*Pi/4)", "cos(n*Pi/3)", "sin(2*n*Pi/5)", "cos(n*Pi/6+Pi/4)", "tan(n*Pi/3)",
    "sin(cos(n*Pi/3)*Pi)", "n^2",
])
safe_denominators = st.sampled_from(["(n+1)", "2^n", "(n+1)!", "3", "(n^2+1)"])


def _combine(children):
    return st.one_of(
        st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(lambda t: f"({t[0]}){t[1]}({t[2]})"),
        st.tuples(children, safe_denominators).map(lambda t: f"({t[0]})/{t[1]}"),
        children.map(lambda s: f"({s})^2"),
        children.map(lambda s: f"-({s})"),
    )


expressions = st.recursive(atoms, _combine, max_leaves=6)
