// Session state shared by the views: mirrors the server-side turns.

export interface TurnRecord {
  question: string;
  answer: string;
  sources: string[];
  turn: number;
}

export class UiSession {
  sessionId: string | null = null;
  readonly turns: TurnRecord[] = [];
  pending = false;
}
