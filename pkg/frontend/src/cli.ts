#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { MissingColumnError } from "./csv";
import { render } from "./render";
import { loadSpec, SpecError } from "./spec";

export function main(argv: string[]): number {
  let exit = 0;
  yargs(argv)
    .scriptName("figure-kit")
    .command(
      "render",
      "render a figure from a JSON spec",
      (y) => y.option("spec", { type: "string", demandOption: true, describe: "figure spec JSON" }),
      (args) => {
        try {
          const result = render(loadSpec(args.spec as string));
          console.log(result.svgPath);
          console.log(result.pngPath);
        } catch (e) {
          if (e instanceof SpecError || e instanceof MissingColumnError) {
            console.error(`error: ${e.message}`);
            exit = 1;
          } else {
            console.error(`error: ${(e as Error).message}`);
            exit = 2;
          }
        }
      },
    )
    .demandCommand(1)
    .strict()
    .exitProcess(false)
    .parseSync();
  return exit;
}

if (require.main === module) {
  process.exit(main(hideBin(process.argv)));
}
