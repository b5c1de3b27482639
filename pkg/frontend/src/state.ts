/** State machine for the rounds screen: one session, one in-flight request. */

import type { ApiClient, RoundRequest } from './api';
import type { RoundResponse, SessionInfo, SettingName, StatsResponse } from './types';
import { SETTINGS } from './types';

export type SettingChoice = SettingName | 'random';

export function asSettingChoice(value: string): SettingChoice {
  if (value === 'random' || (SETTINGS as readonly string[]).includes(value)) {
    return value as SettingChoice;
  }
  throw new Error(`not a setting choice: ${value}`);
}

export interface RoundsScreenState {
  session: SessionInfo | null;
  aliceChoice: SettingChoice;
  bobChoice: SettingChoice;
  rounds: RoundResponse[];
  stats: StatsResponse | null;
  busy: boolean;
  error: string | null;
}

export function initialRoundsScreen(): RoundsScreenState {
  return {
    session: null,
    aliceChoice: 'random',
    bobChoice: 'random',
    rounds: [],
    stats: null,
    busy: false,
    error: null,
  };
}

export function roundRequest(alice: SettingChoice, bob: SettingChoice): RoundRequest {
  if (alice === 'random' && bob === 'random') return { policy: 'random' };
  const request: RoundRequest = {};
  if (alice !== 'random') request.alice_setting = alice;
  if (bob !== 'random') request.bob_setting = bob;
  return request;
}

export class RoundsController {
  state: RoundsScreenState = initialRoundsScreen();

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: RoundsScreenState) => void = () => {},
  ) {}

  private update(patch: Partial<RoundsScreenState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.state);
  }

  async start(seed?: string): Promise<void> {
    const session = await this.api.createSession(seed);
    this.update({ session, rounds: [], stats: null, error: null });
  }

  /** Press the source button; ignored while a round is already in flight. */
  async pressSource(): Promise<RoundResponse | null> {
    const session = this.state.session;
    if (session === null || this.state.busy) return null;
    this.update({ busy: true, error: null });
    try {
      const round = await this.api.playRound(
        session.id,
        roundRequest(this.state.aliceChoice, this.state.bobChoice),
      );
      const stats = await this.api.stats(session.id);
      this.update({ rounds: [...this.state.rounds, round], stats, busy: false });
      return round;
    } catch (err) {
      this.update({ busy: false, error: err instanceof Error ? err.message : String(err) });
      return null;
    }
  }

  chooseAlice(choice: SettingChoice): void {
    this.update({ aliceChoice: choice });
  }

  chooseBob(choice: SettingChoice): void {
    this.update({ bobChoice: choice });
  }
}
