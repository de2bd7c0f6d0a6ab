import * as vscode from "vscode";
import {
  LanguageClient,
  LanguageClientOptions,
  ServerOptions,
  TransportKind,
} from "vscode-languageclient/node";

import { missingServerMessage, serverCommand } from "./config";

let client: LanguageClient | undefined;

export async function activate(context: vscode.ExtensionContext): Promise<void> {
  const configured = vscode.workspace
    .getConfiguration("coolio")
    .get<string>("serverPath");
  const { command, args } = serverCommand(configured);

  const serverOptions: ServerOptions = {
    command,
    args,
    transport: TransportKind.stdio,
  };
  // No middleware: diagnostics and completions pass through untouched.
  const clientOptions: LanguageClientOptions = {
    documentSelector: [{ language: "cool" }],
  };

  client = new LanguageClient(
    "coolio",
    "COOL Language Server",
    serverOptions,
    clientOptions
  );
  context.subscriptions.push(client);

  try {
    await client.start();
  } catch {
    client = undefined;
    void vscode.window.showErrorMessage(missingServerMessage(command));
  }
}

export async function deactivate(): Promise<void> {
  if (client) {
    await client.stop();
    client = undefined;
  }
}
