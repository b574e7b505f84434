"""Command-line surface: keygen, tables, encode, decode, bench, analyze, selftest.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 key/decrypt
error.
"""

from __future__ import annotations

import argparse
import secrets
import sys

from .analysis import GrayImage, analyze_image, compression_rates
from .bitio import pack_bits, unpack_bits
from .coder import CoderParams, StateExplosionError, build_full_fsm
from .container import CipherContainer, ContainerError, parse, serialize
from .crypto import (
    KeyFormatError,
    KeySchedule,
    SplitMix64,
    TruncatedStreamError,
    WrongKeyError,
    bernoulli_bits,
    decrypt,
    encrypt,
    seed_from_hex,
    swap_codeword,
)
from .huffman import attach_tables
from .pgm import PgmError, parse_pgm, pgm_bytes, read_pgm
from .reducer import reduce_machine, validate_reduced


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's 2
        raise UsageError(message)


def _parse_jump_prob(text: str) -> int:
    """Jump probability as 'q' or 'q/256' with q in 0..256."""
    if "/" in text:
        num_text, den_text = text.split("/", 1)
        if den_text.strip() != "256":
            raise UsageError(f"jump probability denominator must be 256: {text!r}")
        text = num_text
    try:
        q = int(text)
    except ValueError:
        raise UsageError(f"invalid jump probability {text!r}") from None
    if not 0 <= q <= 256:
        raise UsageError(f"jump probability numerator must be in 0..256, got {q}")
    return q


def _load_seed(args) -> int:
    if args.key is not None:
        return seed_from_hex(args.key)
    with open(args.key_file, "r", encoding="ascii") as fh:
        return seed_from_hex(fh.read())


def _params(args, jump_q: int = 0) -> CoderParams:
    return CoderParams(args.n, args.p0_num, args.fmax, jump_q)


def _add_params(sub, jump: bool) -> None:
    sub.add_argument("--n", type=int, required=True, help="precision in bits (3..16)")
    sub.add_argument(
        "--p0-num", type=int, required=True,
        help="probability numerator of symbol 0, denominator 2**n",
    )
    sub.add_argument("--fmax", type=int, required=True, help="follow cap (0..15)")
    if jump:
        sub.add_argument(
            "--jump-prob", default="128", metavar="Q[/256]",
            help="jump probability numerator over 256 (default 128)",
        )


def _add_key(sub) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--key", help="16 lowercase hex characters")
    group.add_argument("--key-file", help="file holding the hex key")


def build_parser() -> _Parser:
    parser = _Parser(prog="hfsac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="write a fresh random key file")
    p.add_argument("--out", required=True)

    p = sub.add_parser("tables", help="dump the encoder/code tables")
    _add_params(p, jump=False)
    p.add_argument("--format", choices=("text", "csv"), default="text")

    p = sub.add_parser("encode", help="compress and encrypt a file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    _add_key(p)
    _add_params(p, jump=True)
    p.add_argument("--format", choices=("bits", "pgm"), default="bits")

    p = sub.add_parser("decode", help="decrypt a container back to the original")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    _add_key(p)
    p.add_argument("--format", choices=("bits", "pgm"), default="bits")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)

    p = sub.add_parser("bench", help="compression rates on seeded random bits")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fmax", type=int, required=True)
    p.add_argument("--p0", required=True, help="comma-separated P(0) values")
    p.add_argument("--bits", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)

    p = sub.add_parser("analyze", help="full metric report for a PGM image")
    p.add_argument("--plain", required=True, help="input P5 image")
    _add_key(p)
    _add_params(p, jump=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--hist-csv", help="write plain/cipher histograms as CSV")
    p.add_argument("--visits-csv", help="write state visit counts as CSV")

    p = sub.add_parser("selftest", help="run the built-in invariant sweep")
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)

    return parser


def cmd_keygen(args) -> int:
    key = secrets.token_bytes(8).hex()
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(key + "\n")
    return 0


def _table_rows(codec):
    rows = []
    for s, row in enumerate(codec.rm.transitions):
        for i, t in enumerate(row):
            rows.append(
                (s, t.input_block, t.output_bits, codec.tables[s].codewords[i], t.to)
            )
    return rows


def cmd_tables(args) -> int:
    codec = attach_tables(reduce_machine(build_full_fsm(_params(args))))
    rows = _table_rows(codec)
    if args.format == "csv":
        print("state,input,output,huffman,next_state")
        for row in rows:
            print(",".join(str(c) for c in row))
    else:
        headers = ("state", "input", "output", "huffman", "next")
        table = [tuple(str(c) for c in row) for row in rows]
        widths = [
            max(len(h), *(len(r[i]) for r in table))
            for i, h in enumerate(headers)
        ]
        print("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
        for r in table:
            print("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return 0


def _read_plain_bits(path, fmt: str) -> str:
    with open(path, "rb") as fh:
        data = fh.read()
    if fmt == "pgm":
        return unpack_bits(parse_pgm(data).pixels)
    return unpack_bits(data)


def cmd_encode(args) -> int:
    seed = _load_seed(args)
    jump_q = _parse_jump_prob(args.jump_prob)
    params = _params(args, jump_q)
    bits = _read_plain_bits(args.infile, args.format)
    codec = attach_tables(reduce_machine(build_full_fsm(params)))
    cipher, _ = encrypt(bits, codec, KeySchedule(seed, jump_q))
    blob = serialize(CipherContainer(params, len(bits), cipher))
    with open(args.out, "wb") as fh:
        fh.write(blob)
    return 0


def cmd_decode(args) -> int:
    seed = _load_seed(args)
    with open(args.infile, "rb") as fh:
        container = parse(fh.read())
    params = container.params
    codec = attach_tables(reduce_machine(build_full_fsm(params)))
    ks = KeySchedule(seed, params.jump_q_num)
    bits = decrypt(container.cipher_bits, codec, ks, container.plain_bit_len)
    data = pack_bits(bits)
    if args.format == "pgm":
        if args.width is None or args.height is None:
            raise UsageError("--format pgm needs --width and --height")
        if args.width * args.height * 8 != container.plain_bit_len:
            raise ContainerError(
                "container holds "
                f"{container.plain_bit_len} plain bits, not "
                f"{args.width}x{args.height} pixels"
            )
        data = pgm_bytes(GrayImage(args.width, args.height, data))
    with open(args.out, "wb") as fh:
        fh.write(data)
    return 0


def cmd_bench(args) -> int:
    try:
        p0_list = [float(tok) for tok in args.p0.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"invalid --p0 list {args.p0!r}") from None
    if not p0_list:
        raise UsageError("empty --p0 list")
    print("p0,p0_num,states,ac_pct,fsac_pct,hfac_pct")
    for p0 in p0_list:
        params = CoderParams.from_probability(args.n, p0, args.fmax)
        rm = reduce_machine(build_full_fsm(params))
        codec = attach_tables(rm)
        bits = bernoulli_bits(SplitMix64(args.seed), args.bits, p0)
        rates = compression_rates(bits, codec)
        print(
            f"{p0:g},{params.p0_num},{rm.state_count},"
            f"{rates['ac']:.2f},{rates['fsac']:.2f},{rates['hfac']:.2f}"
        )
    return 0


def cmd_analyze(args) -> int:
    seed = _load_seed(args)
    jump_q = _parse_jump_prob(args.jump_prob)
    params = _params(args, jump_q)
    img = read_pgm(args.plain)
    report = analyze_image(img, params, seed)
    sys.stdout.write(report.to_csv() if args.format == "csv" else report.to_text())
    if args.hist_csv:
        with open(args.hist_csv, "w", encoding="ascii") as fh:
            fh.write("level,plain_count,cipher_count\n")
            for level in range(256):
                fh.write(
                    f"{level},{report.plain_histogram[level]},"
                    f"{report.cipher_histogram[level]}\n"
                )
    if args.visits_csv:
        with open(args.visits_csv, "w", encoding="ascii") as fh:
            fh.write("state,visits\n")
            for s, count in enumerate(report.state_visits):
                fh.write(f"{s},{count}\n")
    return 0


def run_selftest(corrupt: bool = False, verbose: bool = True) -> bool:
    """Invariant sweep over small parameter sets; returns overall pass.

    `corrupt` deliberately breaks one code table first, to prove the checks
    can fail.
    """
    from fractions import Fraction

    from .coder import ac_decode_stream, ac_encode_parts, ac_encode_stream
    from .huffman import StateCodeTable, hfac_decode, hfac_encode
    from .reducer import fsac_encode, fsac_parse

    ok = True

    def check(name: str, passed: bool) -> None:
        nonlocal ok
        ok = ok and passed
        if verbose:
            print(f"{'PASS' if passed else 'FAIL'}  {name}")

    sweep = [
        CoderParams(3, 3, 1),
        CoderParams(4, 3, 1),
        CoderParams(5, 13, 1),
        CoderParams(6, 13, 3),
        CoderParams(8, 128, 3),
    ]
    rng = SplitMix64(0xC0FFEE)
    for params in sweep:
        rm = reduce_machine(build_full_fsm(params))
        codec = attach_tables(rm)
        if corrupt and params.n_bits == 4:
            broken = list(codec.tables)
            cw = list(broken[0].codewords)
            cw[0] = cw[-1]  # duplicate codeword: breaks prefix-freeness/Kraft
            broken[0] = StateCodeTable(0, tuple(cw), broken[0].max_len)
            codec = type(codec)(rm, broken)
        tag = f"n={params.n_bits} p0={params.p0_num} fmax={params.f_max}"
        check(f"{tag}: reduced machine valid", validate_reduced(rm).passed)
        kraft_ok = all(
            sum(Fraction(1, 1 << len(c)) for c in t.codewords) == 1
            for t in codec.tables
        )
        check(f"{tag}: code tables complete", kraft_ok)
        swap_ok = True
        for t in codec.tables:
            for p in range(t.max_len + 2):
                swapped = [swap_codeword(c, p) for c in t.codewords]
                if len(set(swapped)) != len(swapped):
                    swap_ok = False
                if [swap_codeword(c, p) for c in swapped] != list(t.codewords):
                    swap_ok = False
        check(f"{tag}: swap involutive and injective", swap_ok)
        plain = bernoulli_bits(rng, 400, 0.35)
        rt = ac_decode_stream(ac_encode_stream(plain, params), len(plain), params)
        check(f"{tag}: arithmetic roundtrip", rt == plain)
        _steps, padded = fsac_parse(plain, rm)
        pbody, _ = ac_encode_parts(padded, params)
        check(f"{tag}: block coder matches stream coder", fsac_encode(plain, rm) == pbody)
        try:
            hf_ok = (
                hfac_decode(hfac_encode(plain, codec), codec, len(plain)) == plain
            )
        except ValueError:
            hf_ok = False
        check(f"{tag}: huffman roundtrip", hf_ok)
        ks = KeySchedule(rng.next_u64(), 128)
        try:
            cipher, _trace = encrypt(plain, codec, ks)
            enc_ok = decrypt(cipher, codec, ks, len(plain)) == plain
        except ValueError:
            enc_ok = False
        check(f"{tag}: encrypt/decrypt roundtrip", enc_ok)
    return ok


def cmd_selftest(args) -> int:
    return 0 if run_selftest(corrupt=args.corrupt) else 2


_COMMANDS = {
    "keygen": cmd_keygen,
    "tables": cmd_tables,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "bench": cmd_bench,
    "analyze": cmd_analyze,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (KeyFormatError, WrongKeyError, TruncatedStreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ContainerError, PgmError, StateExplosionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
