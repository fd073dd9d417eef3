#!/usr/bin/env node
/** Command-line front end: one subcommand per figure plus the `all` driver. */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import {
  fig1File,
  fig2File,
  makeAllFigures,
  qlMapFile,
  regionFile,
} from "./driver.js";

const str = (describe: string) =>
  ({ type: "string", demandOption: true, describe }) as const;

const outOpt = { out: str("output PNG path") };

yargs(hideBin(process.argv))
  .scriptName("make-all-figures")
  .command(
    ["all", "$0"],
    "generate all data via the cse-schemes CLI and render every figure",
    {
      outdir: { type: "string", default: "figures_out", describe: "PNG directory" },
      datadir: { type: "string", describe: "CSV directory (default: <outdir>/data)" },
      cli: {
        type: "string",
        default: process.env.CSE_SCHEMES_BIN ?? "cse-schemes",
        describe: "cse-schemes executable",
      },
      quick: { type: "boolean", default: false, describe: "small grids for smoke runs" },
    },
    (argv) => {
      makeAllFigures({
        cli: argv.cli,
        outdir: argv.outdir,
        datadir: argv.datadir ?? `${argv.outdir}/data`,
        quick: argv.quick,
        log: (line) => console.log(line),
      });
    },
  )
  .command(
    "fig1",
    "two consecutive iterates of the Fei and Besse schemes, side by side",
    {
      fei: str("simulate snapshot CSV (fei)"),
      besse: str("simulate snapshot CSV (besse)"),
      ...outOpt,
    },
    (argv) => fig1File(argv.fei, argv.besse, argv.out),
  )
  .command(
    "fig2",
    "phase advance per step: exact vs Fei vs Besse",
    {
      data: str("dispersion CSV (scheme all)"),
      ...outOpt,
    },
    (argv) => fig2File(argv.data, argv.out),
  )
  .command(
    ["fig3", "fig4"],
    "(q, L) stability maps for Besse and Fei at the CSVs' fixed K",
    {
      besse: str("scan2d CSV (besse)"),
      fei: str("scan2d CSV (fei)"),
      ...outOpt,
    },
    (argv) => qlMapFile(argv.besse, argv.fei, argv.out),
  )
  .command(
    "fig5",
    "unstable (q, K) region of the Besse scheme",
    {
      data: str("region CSV (besse)"),
      ...outOpt,
    },
    (argv) => regionFile(argv.data, "besse", argv.out),
  )
  .command(
    "fig_modified",
    "unstable (q, K) region of the modified scheme",
    {
      data: str("region CSV (modified)"),
      ...outOpt,
    },
    (argv) => regionFile(argv.data, "modified", argv.out),
  )
  .strict()
  .demandCommand(1)
  .fail((msg, err) => {
    console.error(err ? `error: ${err.message}` : msg);
    process.exit(err ? 1 : 2);
  })
  .parse();
