"""Read the [CONTROLS] of an .inp file through WNTR and print one canonical
line per rule: TARGET ACTION TRIGGER...

Used to freeze tests/data/ctown_subset.controls.expected.
"""
import sys

import wntr


def action_token(action):
    value = action._value
    attr = action._attribute
    if attr == "status":
        return "OPEN" if int(value) == 1 else "CLOSED"
    return "SETTING %s" % repr(float(value))


def main(path):
    wn = wntr.network.WaterNetworkModel(path)
    # WNTR names [CONTROLS] entries "control <n>" in source order
    for name in sorted(wn.control_name_list, key=lambda n: int(n.split()[-1])):
        ctrl = wn.get_control(name)
        action = ctrl.actions()[0]
        target = action.target()[0].name.upper()
        cond = ctrl.condition
        cls = type(cond).__name__
        if cls in ("ValueCondition", "TankLevelCondition"):
            rel = {"lt": "BELOW", "gt": "ABOVE"}[cond._relation.name]
            trig = "NODE %s %s %r" % (cond._source_obj.name.upper(), rel, float(cond._threshold))
        elif cls == "SimTimeCondition":
            trig = "TIME %r" % (cond._threshold / 3600.0)
        elif cls == "TimeOfDayCondition":
            trig = "CLOCKTIME %r" % (cond._threshold / 3600.0)
        else:
            raise SystemExit("unsupported condition " + cls)
        print(target, action_token(action), trig)


if __name__ == "__main__":
    main(sys.argv[1])
