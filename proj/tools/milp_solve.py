#!/usr/bin/env python3
"""Solve an LP file with HiGHS (or SCIP) and write a `name value` solution.

usage: milp_solve.py MODEL.lp SOLUTION.sol [TIME_LIMIT]
"""

import sys


def solve_highs(lp, limit):
    import highspy

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("random_seed", 0)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 1e-7)
    if limit is not None:
        h.setOptionValue("time_limit", limit)
    if h.readModel(lp) == highspy.HighsStatus.kError:
        raise RuntimeError("HiGHS cannot read " + lp)
    h.run()
    status = h.getModelStatus()
    names = h.getLp().col_names_
    info = h.getInfo()
    have = info.primal_solution_status == 2
    values = list(h.getSolution().col_value) if have else []
    if status == highspy.HighsModelStatus.kOptimal:
        label = "optimal"
    elif status in (highspy.HighsModelStatus.kInfeasible, highspy.HighsModelStatus.kUnboundedOrInfeasible):
        label = "infeasible"
    else:
        label = "feasible-bounded" if have else "timeout"
    objective = info.objective_function_value if have else None
    return label, objective, list(zip(names, values))


def solve_scip(lp, limit):
    from pyscipopt import Model

    m = Model()
    m.hideOutput()
    m.readProblem(lp)
    m.setParam("limits/gap", 0.0)
    m.setParam("randomization/randomseedshift", 0)
    if limit is not None:
        m.setParam("limits/time", limit)
    m.optimize()
    status = m.getStatus()
    have = m.getNSols() > 0
    if status == "optimal":
        label = "optimal"
    elif status == "infeasible":
        label = "infeasible"
    else:
        label = "feasible-bounded" if have else "timeout"
    if not have:
        return label, None, []
    best = m.getBestSol()
    return label, m.getSolObjVal(best), [(v.name, m.getSolVal(best, v)) for v in m.getVars()]


def main(argv):
    if len(argv) not in (3, 4):
        sys.stderr.write(__doc__)
        return 1
    lp, sol = argv[1], argv[2]
    limit = float(argv[3]) if len(argv) == 4 else None
    try:
        import highspy  # noqa: F401
        solve = solve_highs
    except ImportError:
        solve = solve_scip
    label, objective, values = solve(lp, limit)
    with open(sol, "w") as out:
        out.write("# Status = %s\n" % label)
        if objective is not None:
            out.write("# Objective value = %r\n" % objective)
        for name, value in values:
            out.write("%s %r\n" % (name, value))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
