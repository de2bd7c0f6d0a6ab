/**
 * Pure helpers shared by the extension entry point and the tests.
 *
 * The client deliberately contains no language logic: it only knows how to
 * find the server binary and what to tell the user when it is missing.
 */

export interface ServerCommand {
  command: string;
  args: string[];
}

export const DEFAULT_SERVER_PATH = "coolio";

/** Build the spawn invocation for a configured executable path. */
export function serverCommand(configuredPath?: string | null): ServerCommand {
  const command =
    configuredPath && configuredPath.trim().length > 0
      ? configuredPath.trim()
      : DEFAULT_SERVER_PATH;
  return { command, args: ["lsp"] };
}

/** User-visible message when the server executable cannot be started. */
export function missingServerMessage(configuredPath: string): string {
  return (
    `Could not start the COOL language server: "${configuredPath}" was not ` +
    `found. Install the coolio package or point the coolio.serverPath ` +
    `setting at the executable.`
  );
}
