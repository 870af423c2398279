#!/usr/bin/env python3
"""Generate the rank-sort benchmark programs for N inputs and each calling context."""
import argparse
import pathlib

CONTEXTS = ("vars", "arrs-randomized", "arrs-grouped")


def declarations(n, ctx):
    fields = [f"data_t *in{k};" for k in range(1, n + 1)]
    fields += [f"data_t *out{k};" for k in range(1, n + 1)]
    fields += [f"pos_t *pos{k};" for k in range(1, n + 1)]
    out = [
        "typedef struct { i32 v; } data_t;",
        "typedef u32 pos_t;",
        f"struct intf{n}_t {{",
        *("  " + f for f in fields),
        "};",
        "",
    ]
    if ctx == "vars":
        out.append(" ".join(f"data_t df{k};" for k in range(1, 2 * n + 1)))
        out.append(" ".join(f"pos_t pf{k};" for k in range(1, n + 1)))
    else:
        out.append(f"data_t df[{2 * n}];")
        out.append(f"pos_t pf[{n}];")
    out += [
        f"intf{n}_t SORT;",
        f"intf{n}_t *args;",
        "data_t **inArr; data_t **outArr; pos_t **posArr;",
        f"i32 key[{n}];",
        f"u32 rank[{n}];",
        "",
    ]
    return out


def context(n, ctx):
    out = ["// calling context"]
    if ctx == "vars":
        out += [f"df{k}.v = nondet();" for k in range(1, 2 * n + 1)]
        out += [f"SORT.in{k} = &df{k};" for k in range(1, n + 1)]
        out += [f"SORT.out{k} = &df{n + k};" for k in range(1, n + 1)]
        out += [f"SORT.pos{k} = &pf{k};" for k in range(1, n + 1)]
    else:
        out.append(f"for i in 0..{2 * n} {{ df[i].v = nondet(); }}")
        if ctx == "arrs-randomized":
            ins = list(range(1, n + 1))
            outs = [n + k for k in range(1, n)] + [0]
        else:
            ins = list(range(0, n))
            outs = list(range(n, 2 * n))
        out += [f"SORT.in{k + 1} = df + {e};" for k, e in enumerate(ins)]
        out += [f"SORT.out{k + 1} = df + {e};" for k, e in enumerate(outs)]
        out += [f"SORT.pos{k} = pf + {k - 1};" for k in range(1, n + 1)]
    out += ["args = &SORT;", "", "entry;", ""]
    return out


def body(n):
    out = [
        "// sort: the interface record is walked as three pointer arrays",
        "inArr = &args->in1;",
        "outArr = &args->out1;",
        "posArr = &args->pos1;",
    ]
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            out.append(f"assume(args->out{a} != args->out{b});")
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            out.append(f"assume(args->pos{a} != args->pos{b});")
    out.append(f"for i in 0..{n} {{ key[i] = (*inArr[i]).v; }}")
    for i in range(n):
        terms = [f"(key[{j}] <= key[{i}])" for j in range(i)]
        terms += [f"(key[{j}] < key[{i}])" for j in range(i + 1, n)]
        out.append(f"rank[{i}] = " + " + ".join(terms) + ";")
    out += [
        f"for i in 0..{n} {{ *posArr[i] = rank[i]; }}",
        f"for i in 0..{n} {{ (*outArr[*posArr[i]]).v = (*inArr[i]).v; }}",
        "",
        "// post-conditions",
    ]
    for k in range(1, n):
        out.append(f"assert((*args->out{k}).v <= (*args->out{k + 1}).v);")
    out.append(f"for i in 0..{n} {{ assert((*outArr[*posArr[i]]).v == key[i]); }}")
    out.append(f"for i in 0..{n} {{ assert((*inArr[i]).v == key[i]); }}")
    return out


def program(n, ctx):
    return "\n".join(declarations(n, ctx) + context(n, ctx) + body(n)) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).parent))
    ap.add_argument("-n", type=int, action="append", help="input count (default: 4 and 8)")
    args = ap.parse_args()
    for n in args.n or [4, 8]:
        for ctx in CONTEXTS:
            path = pathlib.Path(args.out) / f"sort{n}_{ctx}.mc"
            path.write_text(program(n, ctx))
            print(path)


if __name__ == "__main__":
    main()
