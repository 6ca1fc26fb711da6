"""Import the extension module and run one design end to end."""

from pathlib import Path

import soctam_py

DATA = Path(__file__).resolve().parents[2] / "core" / "data"


def main():
    assert soctam_py.test_time(218, 521, 521) == 114317

    design = soctam_py.Design(
        (DATA / "d695.soc").read_text(), (DATA / "d695.power").read_text()
    )
    assert len(design) == 10
    assert design.cores[9].power_mw == 1144

    table = design.tam_time_table(6, 16)
    assert table[0][0] <= 16
    assert all(a[1] < b[1] for a, b in zip(table, table[1:]))

    sched = design.schedule(32, 1500)
    assert design.validate(sched, 32, 1500) == []
    again = soctam_py.Schedule.parse(sched.export())
    assert again.placements == sched.placements
    print(f"d695 w=32 pmax=1500: makespan {sched.makespan}, tmin {sched.t_min}")

    small = soctam_py.Design.random(4, n_cores=3, max_chains=3, max_len=20)
    opt = small.optimal_makespan(3)
    assert small.schedule(3).makespan >= opt
    assert sched.svg(32).startswith("<?xml")
    print("smoke test ok")


if __name__ == "__main__":
    main()
